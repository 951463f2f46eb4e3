#include "matsense/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace matsense::io {

using nlohmann::json;
namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.good()) throw InvalidInput("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

std::string dump(const json& j) { return j.dump() + "\n"; }

}  // namespace

void save_f64mat(const fs::path& path, const SymMatrix& a) {
  const Index n = a.dim();
  json j;
  j["format"] = "f64mat";
  j["version"] = 1;
  j["rows"] = n;
  j["cols"] = n;
  std::vector<double> data;
  data.reserve(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) data.push_back(a(i, k));
  j["data"] = data;
  atomic_write(path, dump(j));
}

SymMatrix load_f64mat(const fs::path& path) {
  json j = read_json(path);
  if (j.value("format", "") != "f64mat" || j.value("version", 0) != 1) {
    throw InvalidInput(path.string() + " is not an f64mat v1 file");
  }
  Index rows = j.at("rows").get<Index>();
  Index cols = j.at("cols").get<Index>();
  auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Index>(data.size()) != rows * cols) {
    throw InvalidInput(path.string() + ": data length does not match rows*cols");
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) m(i, k) = data[i * cols + k];
  return SymMatrix(std::move(m));
}

void save_instance(const fs::path& path, const MeasurementSet& ms,
                   const std::optional<std::string>& ground_truth_path) {
  json j;
  j["format"] = "msinst";
  j["version"] = 1;
  j["n"] = ms.n();
  j["m"] = ms.m();
  if (ms.regime() == Regime::Orthogonal) {
    j["regime"] = "orthogonal";
  } else {
    j["regime"] = json{{"rho", ms.rho()}};
  }
  std::vector<std::vector<double>> u(ms.m());
  for (Index i = 0; i < ms.m(); ++i) {
    u[i].resize(ms.n());
    for (Index k = 0; k < ms.n(); ++k) u[i][k] = ms.u()(k, i);
  }
  j["u"] = u;
  j["b"] = std::vector<double>(ms.b().data(), ms.b().data() + ms.m());
  if (ground_truth_path) j["ground_truth"] = *ground_truth_path;
  atomic_write(path, dump(j));
}

Instance load_instance(const fs::path& path) {
  json j = read_json(path);
  if (j.value("format", "") != "msinst" || j.value("version", 0) != 1) {
    throw InvalidInput(path.string() + " is not an msinst v1 file");
  }
  Index n = j.at("n").get<Index>();
  Index m = j.at("m").get<Index>();

  Regime regime = Regime::Orthogonal;
  double rho = 0.0;
  const auto& rj = j.at("regime");
  if (rj.is_string()) {
    if (rj.get<std::string>() != "orthogonal") {
      throw InvalidInput(path.string() + ": unknown regime " + rj.get<std::string>());
    }
  } else if (rj.is_object() && rj.contains("rho")) {
    regime = Regime::RhoBounded;
    rho = rj.at("rho").get<double>();
  } else {
    throw InvalidInput(path.string() + ": regime must be \"orthogonal\" or {\"rho\":..}");
  }

  auto rows = j.at("u").get<std::vector<std::vector<double>>>();
  if (static_cast<Index>(rows.size()) != m) {
    throw InvalidInput(path.string() + ": u must have m rows");
  }
  Matrix u(n, m);
  for (Index i = 0; i < m; ++i) {
    if (static_cast<Index>(rows[i].size()) != n) {
      throw InvalidInput(path.string() + ": u row " + std::to_string(i) + " has wrong length");
    }
    for (Index k = 0; k < n; ++k) u(k, i) = rows[i][k];
  }
  auto b_raw = j.at("b").get<std::vector<double>>();
  if (static_cast<Index>(b_raw.size()) != m) {
    throw InvalidInput(path.string() + ": b must have m entries");
  }
  Vector b = Eigen::Map<Vector>(b_raw.data(), m);

  Instance inst{MeasurementSet::from_vectors(std::move(u), std::move(b), regime, rho),
                std::nullopt};
  if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
    fs::path gt = j.at("ground_truth").get<std::string>();
    if (gt.is_relative()) gt = path.parent_path() / gt;
    inst.ground_truth = GroundTruth{load_f64mat(gt)};
  }
  return inst;
}

SolverConfig load_config(const fs::path& path, SolverConfig cfg) {
  json j = read_json(path);
  if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  if (j.contains("batch")) cfg.batch = j.at("batch").get<int>();
  if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<long>();
  if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("log_every")) cfg.log_every = j.at("log_every").get<long>();
  if (j.contains("recompute_every")) cfg.recompute_every = j.at("recompute_every").get<long>();
  if (j.contains("stop_rule")) {
    std::string rule = j.at("stop_rule").get<std::string>();
    if (rule == "potential_below") {
      cfg.stop_rule = StopRule::PotentialBelow;
    } else if (rule == "max_residual_below") {
      cfg.stop_rule = StopRule::MaxResidualBelow;
    } else if (rule == "iter_budget") {
      cfg.stop_rule = StopRule::IterBudget;
    } else {
      throw InvalidInput("unknown stop_rule " + rule);
    }
  }
  if (j.contains("stop_threshold")) cfg.stop_threshold = j.at("stop_threshold").get<double>();
  return cfg;
}

void save_trace(const fs::path& path, const ConvergenceTrace& trace) {
  std::ostringstream os;
  trace.write_csv(os);
  atomic_write(path, os.str());
}

}  // namespace matsense::io

// matsense: generate, solve, verify, and benchmark rank-one matrix sensing
// instances from the command line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "matsense/io.hpp"

namespace {

using namespace matsense;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitBudget = 4;

Spectrum parse_spectrum(const std::string& text, int n) {
  if (text.find(':') != std::string::npos) {
    auto pos = text.find(':');
    return SpectrumUniform{std::stod(text.substr(0, pos)), std::stod(text.substr(pos + 1))};
  }
  SpectrumExplicit ex;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) ex.values.push_back(std::stod(item));
  if (static_cast<int>(ex.values.size()) != n) {
    throw InvalidInput("explicit spectrum must list exactly n eigenvalues");
  }
  return ex;
}

struct GenArgs {
  int n = 16, m = 8;
  std::string regime = "orthogonal";
  double rho = 0.0;
  std::string spectrum = "0.5:2.0";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  GroundTruth gt = gen_ground_truth(a.n, parse_spectrum(a.spectrum, a.n), a.seed);
  MeasurementSet ms = [&] {
    if (a.regime == "orthogonal") {
      return gen_orthogonal(a.n, a.m, gt, a.seed);
    }
    if (a.regime == "rho") {
      double rho = a.rho > 0 ? a.rho : 1.0 / (10.0 * a.m);
      return gen_rho_bounded(a.n, a.m, rho, gt, a.seed);
    }
    throw InvalidInput("unknown regime '" + a.regime + "' (expected orthogonal|rho)");
  }();

  fs::path out(a.out);
  fs::path gt_path = out;
  gt_path.replace_extension(".astar.json");
  io::save_f64mat(gt_path, gt.a_star);
  io::save_instance(out, ms, gt_path.filename().string());

  std::cout << "n=" << ms.n() << " m=" << ms.m() << " regime="
            << (ms.regime() == Regime::Orthogonal
                    ? std::string("orthogonal")
                    : "rho(" + std::to_string(ms.rho()) + ")")
            << " R=" << ms.r_bound() << "\n";
  return kExitOk;
}

struct SolveArgs {
  std::string instance;
  std::string algorithm = "gd";
  std::string config;
  double delta = 0.1;
  int batch = 4;
  long max_iters = 500000;
  std::uint64_t seed = 0;
  double lambda = 0.0;    // 0 = use the default schedule
  double epsilon = 0.0;
  std::string out;
  std::string trace;
  bool lambda_set = false, epsilon_set = false, batch_set = false;
};

int cmd_solve(const SolveArgs& a) {
  io::Instance inst = io::load_instance(a.instance);
  const MeasurementSet& ms = inst.ms;

  if (a.algorithm == "sgd" && ms.regime() != Regime::Orthogonal) {
    std::cerr << "error: sgd requires an orthogonal instance; use sgd-general\n";
    return kExitUsage;
  }
  if (a.algorithm == "spectral" && !inst.ground_truth) {
    std::cerr << "error: spectral requires an instance with a ground_truth reference\n";
    return kExitUsage;
  }

  SolverConfig cfg;
  bool stochastic = a.algorithm == "sgd" || a.algorithm == "sgd-general";
  if (a.algorithm == "spectral") {
    cfg = default_spectral_schedule(static_cast<int>(ms.n()), a.delta, a.max_iters);
  } else if (stochastic) {
    cfg = default_sgd_schedule(ms, a.delta, a.batch, a.max_iters);
  } else if (a.algorithm == "gd") {
    cfg = default_gd_schedule(ms, a.delta, a.max_iters);
  } else {
    std::cerr << "error: unknown algorithm '" << a.algorithm
              << "' (expected gd|sgd|sgd-general|spectral)\n";
    return kExitUsage;
  }
  cfg.seed = a.seed;
  if (!a.config.empty()) cfg = io::load_config(a.config, cfg);
  if (a.lambda_set) cfg.lambda = a.lambda;
  if (a.epsilon_set) cfg.epsilon = a.epsilon;
  if (a.batch_set) cfg.batch = a.batch;

  RunResult res;
  if (a.algorithm == "gd") {
    res = run_gd(ms, cfg);
  } else if (a.algorithm == "sgd") {
    res = run_sgd(ms, cfg);
  } else if (a.algorithm == "sgd-general") {
    res = run_sgd_general(ms, cfg);
  } else {
    SpectralOracle oracle(*inst.ground_truth);
    res = run_spectral_gd(oracle, init_iterate(ms), cfg);
  }

  if (!a.out.empty()) io::save_f64mat(a.out, res.solution);
  if (!a.trace.empty()) io::save_trace(a.trace, res.trace);

  const TraceRecord& last = res.trace.records.back();
  std::cout << "t=" << last.t << " phi=" << last.phi
            << " max_residual=" << last.max_abs_residual << "\n";
  return res.status == RunStatus::Converged ? kExitOk : kExitBudget;
}

struct VerifyArgs {
  std::string instance;
  std::string solution;
  double delta = 0.1;
};

int cmd_verify(const VerifyArgs& a) {
  io::Instance inst = io::load_instance(a.instance);
  SymMatrix sol = io::load_f64mat(a.solution);
  if (sol.dim() != inst.ms.n()) {
    std::cerr << "error: solution dim " << sol.dim() << " != instance dim " << inst.ms.n()
              << "\n";
    return kExitUsage;
  }
  VerifyResult v = verify_solution(inst.ms, sol, a.delta);
  std::cout << "max_residual=" << v.max_residual << " worst_index=" << v.worst_index
            << " delta=" << a.delta << " -> " << (v.pass ? "PASS" : "FAIL") << "\n";
  return v.pass ? kExitOk : kExitVerifyFail;
}

struct BenchArgs {
  std::string instance;
  std::string algorithms;  // comma-separated
  int seeds = 1;
  int batch = 4;
  double delta = 0.1;
  long max_iters = 100000;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  io::Instance inst = io::load_instance(a.instance);
  const MeasurementSet& ms = inst.ms;

  std::vector<std::string> algos;
  std::stringstream ss(a.algorithms);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) algos.push_back(item);
  }
  if (algos.empty()) {
    std::cerr << "error: at least one algorithm required\n";
    return kExitUsage;
  }

  std::ostringstream csv;
  csv << "algorithm,seed,iters,wall_nanos_total,wall_nanos_per_iter,final_max_residual\n";
  for (const auto& algo : algos) {
    bool stochastic = algo == "sgd" || algo == "sgd-general";
    int runs = stochastic ? a.seeds : 1;
    for (int s = 0; s < runs; ++s) {
      SolveArgs sa;
      sa.algorithm = algo;
      sa.delta = a.delta;
      sa.batch = a.batch;
      sa.max_iters = a.max_iters;

      SolverConfig cfg;
      if (algo == "spectral") {
        cfg = default_spectral_schedule(static_cast<int>(ms.n()), a.delta, a.max_iters);
      } else if (stochastic) {
        cfg = default_sgd_schedule(ms, a.delta, a.batch, a.max_iters);
      } else if (algo == "gd") {
        cfg = default_gd_schedule(ms, a.delta, a.max_iters);
      } else {
        std::cerr << "error: unknown algorithm '" << algo << "'\n";
        return kExitUsage;
      }
      cfg.seed = static_cast<std::uint64_t>(s);

      RunResult res;
      if (algo == "gd") {
        res = run_gd(ms, cfg);
      } else if (algo == "sgd") {
        if (ms.regime() != Regime::Orthogonal) {
          std::cerr << "error: sgd requires an orthogonal instance\n";
          return kExitUsage;
        }
        res = run_sgd(ms, cfg);
      } else if (algo == "sgd-general") {
        res = run_sgd_general(ms, cfg);
      } else {
        if (!inst.ground_truth) {
          std::cerr << "error: spectral requires a ground_truth reference\n";
          return kExitUsage;
        }
        SpectralOracle oracle(*inst.ground_truth);
        res = run_spectral_gd(oracle, init_iterate(ms), cfg);
      }

      long long total = 0;
      for (const auto& r : res.trace.records) total += r.wall_nanos;
      long iters = std::max(res.iterations, 1L);
      csv << algo << ',' << s << ',' << res.iterations << ',' << total << ','
          << total / iters << ',' << res.trace.records.back().max_abs_residual << '\n';
    }
  }

  if (!a.out.empty()) {
    io::atomic_write(a.out, csv.str());
  } else {
    std::cout << csv.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("MATSENSE_THREADS")) {
    int v = std::atoi(threads);
    if (v > 0) Eigen::setNbThreads(v);
  }

  CLI::App app{"rank-one matrix sensing via cosh-potential descent"};
  app.require_subcommand(1);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--n", ga.n, "ambient dimension")->required();
  gen->add_option("--m", ga.m, "number of measurements")->required();
  gen->add_option("--regime", ga.regime, "orthogonal|rho");
  gen->add_option("--rho", ga.rho, "pairwise bound (default 1/(10m))");
  gen->add_option("--spectrum", ga.spectrum, "lo:hi or comma-separated eigenvalues");
  gen->add_option("--seed", ga.seed, "RNG seed");
  gen->add_option("--out", ga.out, "output msinst file")->required();

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "run a solver on an instance");
  solve->add_option("--instance", sa.instance, "msinst file")->required();
  solve->add_option("--algorithm", sa.algorithm, "gd|sgd|sgd-general|spectral");
  solve->add_option("--config", sa.config, "JSON config overriding the default schedule");
  solve->add_option("--delta", sa.delta, "target accuracy");
  auto* bopt = solve->add_option("--batch", sa.batch, "SGD batch size");
  solve->add_option("--max-iters", sa.max_iters, "iteration budget");
  solve->add_option("--seed", sa.seed, "RNG seed");
  auto* lopt = solve->add_option("--lambda", sa.lambda, "override schedule lambda");
  auto* eopt = solve->add_option("--epsilon", sa.epsilon, "override schedule epsilon");
  solve->add_option("--out", sa.out, "solution f64mat file");
  solve->add_option("--trace", sa.trace, "trace CSV file");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check a solution against an instance");
  verify->add_option("--instance", va.instance)->required();
  verify->add_option("--solution", va.solution)->required();
  verify->add_option("--delta", va.delta)->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "time solvers on an instance");
  bench->add_option("--instance", ba.instance)->required();
  bench->add_option("--algorithms", ba.algorithms, "comma-separated list")->required();
  bench->add_option("--seeds", ba.seeds, "seeds per stochastic algorithm");
  bench->add_option("--batch", ba.batch, "SGD batch size");
  bench->add_option("--delta", ba.delta, "target accuracy");
  bench->add_option("--max-iters", ba.max_iters, "iteration budget");
  bench->add_option("--out", ba.out, "output CSV (stdout if absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(ga);
    if (solve->parsed()) {
      sa.lambda_set = lopt->count() > 0;
      sa.epsilon_set = eopt->count() > 0;
      sa.batch_set = bopt->count() > 0;
      return cmd_solve(sa);
    }
    if (verify->parsed()) return cmd_verify(va);
    if (bench->parsed()) return cmd_bench(ba);
  } catch (const GenerationFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Overflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

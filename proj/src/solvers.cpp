#include "matsense/solvers.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

namespace matsense {

namespace {

constexpr double kStationaryTol = 1e-14;

using Clock = std::chrono::steady_clock;

long long nanos_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
}

void check_common(const SolverConfig& cfg) {
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda))
    throw InvalidInput("SolverConfig: lambda must be finite and > 0");
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
    throw InvalidInput("SolverConfig: epsilon must be finite and > 0");
  if (cfg.max_iters < 1) throw InvalidInput("SolverConfig: max_iters must be >= 1");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
    throw InvalidInput("SolverConfig: delta must lie in (0,1)");
}

void check_gd(const SolverConfig& cfg) {
  check_common(cfg);
  if (cfg.epsilon * cfg.lambda > 0.01 * (1.0 + 1e-12))
    throw InvalidInput("SolverConfig: GD requires epsilon * lambda <= 0.01");
}

void check_sgd(const SolverConfig& cfg, Index m) {
  check_common(cfg);
  if (cfg.batch < 1 || cfg.batch > m)
    throw InvalidInput("SolverConfig: batch must satisfy 1 <= B <= m");
  double bound = 0.01 * static_cast<double>(cfg.batch) / static_cast<double>(m);
  if (cfg.epsilon * cfg.lambda > bound * (1.0 + 1e-12))
    throw InvalidInput("SolverConfig: SGD requires epsilon * lambda <= 0.01 * B / m");
}

double maintained_grad_norm(SolverState& state, const MeasurementSet& ms,
                            const PotentialParams& p) {
  if (ms.regime() == Regime::Orthogonal) return grad_norm_orthogonal(state.z, p);
  return grad_norm_general(state.z, ms.gram(), p, &state.grad_norm_clamped);
}

bool stop_met(const SolverConfig& cfg, const Vector& z) {
  switch (cfg.stop_rule) {
    case StopRule::MaxResidualBelow:
      return z.size() == 0 || z.cwiseAbs().maxCoeff() <= cfg.delta;
    case StopRule::PotentialBelow:
      return log_phi(z, PotentialParams(cfg.lambda)) <= std::log(cfg.stop_threshold);
    case StopRule::IterBudget:
      return false;
  }
  return false;
}

TraceRecord make_record(const SolverState& state, const SolverConfig& cfg, long long nanos,
                        bool recompute) {
  TraceRecord rec;
  rec.t = state.t;
  rec.phi = std::exp(log_phi(state.z, PotentialParams(cfg.lambda)));
  rec.grad_norm = state.grad_norm;
  rec.max_abs_residual = state.z.size() ? state.z.cwiseAbs().maxCoeff() : 0.0;
  rec.wall_nanos = nanos;
  rec.overflow = !std::isfinite(rec.phi) || !std::isfinite(rec.grad_norm) ||
                 state.grad_norm_clamped;
  rec.recompute = recompute;
  return rec;
}

}  // namespace

SolverConfig default_gd_schedule(const MeasurementSet& ms, double delta, long max_iters) {
  SolverConfig cfg;
  cfg.delta = delta;
  cfg.lambda = std::log(6.0 * static_cast<double>(ms.m())) / delta;
  cfg.epsilon = 0.005 / cfg.lambda;
  cfg.max_iters = max_iters;
  cfg.stop_rule = StopRule::PotentialBelow;
  cfg.stop_threshold = 3.0 * static_cast<double>(ms.m());
  return cfg;
}

SolverConfig default_sgd_schedule(const MeasurementSet& ms, double delta, int batch,
                                  long max_iters) {
  SolverConfig cfg = default_gd_schedule(ms, delta, max_iters);
  cfg.batch = batch;
  cfg.epsilon = 0.005 * static_cast<double>(batch) /
                (cfg.lambda * static_cast<double>(ms.m()));
  return cfg;
}

SolverConfig default_spectral_schedule(int n, double delta, long max_iters) {
  SolverConfig cfg;
  cfg.delta = delta;
  cfg.lambda = std::log(6.0 * n) / delta;
  cfg.epsilon = 0.005 / cfg.lambda;
  cfg.max_iters = max_iters;
  cfg.stop_rule = StopRule::PotentialBelow;
  cfg.stop_threshold = 3.0 * n;
  return cfg;
}

SymMatrix init_iterate(const MeasurementSet& ms) {
  double tau = ms.b().maxCoeff();
  return SymMatrix::scaled_identity(ms.n(), tau);
}

SolverState make_state(const MeasurementSet& ms, const SolverConfig& cfg) {
  SolverState state;
  state.iterate = init_iterate(ms);
  state.z = residuals(ms, state.iterate);
  state.t = 1;
  state.grad_norm = maintained_grad_norm(state, ms, PotentialParams(cfg.lambda));
  return state;
}

std::vector<int> sample_batch(int m, int batch, std::mt19937_64& rng) {
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < batch; ++k) {
    std::uniform_int_distribution<int> pick(k, m - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  idx.resize(batch);
  return idx;
}

void gd_step(SolverState& state, const MeasurementSet& ms, const SolverConfig& cfg) {
  const PotentialParams p(cfg.lambda);
  ScaledSinh s = scaled_sinh(state.z, p);

  // ||grad||_F in scaled units via the Gram identity
  // ||sum_i s_i u_i u_i^T||_F^2 = sum_{i,j} w_{i,j}^2 s_i s_j.
  double q;
  if (ms.regime() == Regime::Orthogonal) {
    q = s.values.norm();
  } else {
    const Matrix& w = ms.gram();
    double quad = s.values.dot(w.cwiseProduct(w) * s.values);
    q = std::sqrt(std::max(quad, 0.0));
  }
  if (q <= 0.0 || state.grad_norm <= kStationaryTol) throw AlreadyStationary();

  Vector coef = -(cfg.epsilon / q) * s.values;
  state.iterate.rank_update(ms.u(), coef);

  state.z = residuals(ms, state.iterate);
  state.grad_norm = maintained_grad_norm(state, ms, p);
  ++state.t;
}

void sgd_step_orthogonal(SolverState& state, const MeasurementSet& ms, const SolverConfig& cfg,
                         std::mt19937_64& rng) {
  const PotentialParams p(cfg.lambda);
  if (state.grad_norm <= kStationaryTol) throw AlreadyStationary();

  std::vector<int> batch = sample_batch(static_cast<int>(ms.m()), cfg.batch, rng);

  // Snapshot of sinh(lambda z) and the full gradient norm before any z
  // mutation; the update is a function of state at time t only.
  ScaledSinh s = scaled_sinh(state.z, p);
  double q = s.values.norm();
  if (q <= 0.0) throw AlreadyStationary();

  const double scale = -cfg.epsilon * static_cast<double>(ms.m()) /
                       (static_cast<double>(cfg.batch) * q);
  const int b = static_cast<int>(batch.size());
  Matrix ub(ms.n(), b);
  Vector coef(b);
  for (int k = 0; k < b; ++k) {
    ub.col(k) = ms.u().col(batch[k]);
    coef(k) = scale * s.values(batch[k]);
  }
  state.iterate.rank_update(ub, coef);

  // Orthogonality kills cross terms: z_i moves only for i in the batch.
  for (int k = 0; k < b; ++k) state.z(batch[k]) += coef(k);

  state.grad_norm = grad_norm_orthogonal(state.z, p);
  ++state.t;
}

void sgd_step_general(SolverState& state, const MeasurementSet& ms, const SolverConfig& cfg,
                      std::mt19937_64& rng) {
  const PotentialParams p(cfg.lambda);
  if (state.grad_norm <= kStationaryTol) throw AlreadyStationary();

  std::vector<int> batch = sample_batch(static_cast<int>(ms.m()), cfg.batch, rng);
  const Matrix& w = ms.gram();

  ScaledSinh s = scaled_sinh(state.z, p);
  double quad = s.values.dot(w.cwiseProduct(w) * s.values);
  state.grad_norm_clamped = quad < 0.0;
  double q = std::sqrt(std::max(quad, 0.0));
  if (q <= 0.0) throw AlreadyStationary();

  const double scale = -cfg.epsilon * static_cast<double>(ms.m()) /
                       (static_cast<double>(cfg.batch) * q);
  const int b = static_cast<int>(batch.size());
  Matrix ub(ms.n(), b);
  Vector coef(b);
  for (int k = 0; k < b; ++k) {
    ub.col(k) = ms.u().col(batch[k]);
    coef(k) = scale * s.values(batch[k]);
  }
  state.iterate.rank_update(ub, coef);

  // Every residual moves: z_i += sum_{j in batch} w_{i,j}^2 coef_j.
  for (int k = 0; k < b; ++k) {
    state.z += coef(k) * w.col(batch[k]).array().square().matrix();
  }

  state.grad_norm = grad_norm_general(state.z, w, p, &state.grad_norm_clamped);
  ++state.t;
}

namespace {

template <typename StepFn>
RunResult run_loop(const MeasurementSet& ms, const SolverConfig& cfg, StepFn step) {
  SolverState state = make_state(ms, cfg);
  const PotentialParams p(cfg.lambda);

  RunResult result;
  result.trace.records.push_back(make_record(state, cfg, 0, false));

  while (true) {
    if (stop_met(cfg, state.z) || state.grad_norm <= kStationaryTol) {
      result.status = RunStatus::Converged;
      break;
    }
    if (state.t > cfg.max_iters) {
      result.status = RunStatus::BudgetExceeded;
      break;
    }

    auto t0 = Clock::now();
    step(state);
    long long nanos = nanos_since(t0);

    bool recompute = cfg.recompute_every > 0 && (state.t - 1) % cfg.recompute_every == 0;
    if (recompute) {
      state.z = residuals(ms, state.iterate);
      state.grad_norm = maintained_grad_norm(state, ms, p);
    }
    if (cfg.log_every > 0 && ((state.t - 1) % cfg.log_every == 0 || state.t > cfg.max_iters)) {
      result.trace.records.push_back(make_record(state, cfg, nanos, recompute));
    }
  }

  if (result.trace.records.empty() || result.trace.records.back().t != state.t) {
    result.trace.records.push_back(make_record(state, cfg, 0, false));
  }
  result.solution = state.iterate;
  result.iterations = state.t - 1;
  return result;
}

}  // namespace

RunResult run_gd(const MeasurementSet& ms, const SolverConfig& cfg) {
  check_gd(cfg);
  return run_loop(ms, cfg, [&](SolverState& s) { gd_step(s, ms, cfg); });
}

RunResult run_sgd(const MeasurementSet& ms, const SolverConfig& cfg) {
  check_sgd(cfg, ms.m());
  if (ms.regime() != Regime::Orthogonal) {
    throw InvalidInput("run_sgd requires the orthogonal regime; use run_sgd_general");
  }
  std::mt19937_64 rng(cfg.seed);
  return run_loop(ms, cfg, [&](SolverState& s) { sgd_step_orthogonal(s, ms, cfg, rng); });
}

RunResult run_sgd_general(const MeasurementSet& ms, const SolverConfig& cfg) {
  check_sgd(cfg, ms.m());
  std::mt19937_64 rng(cfg.seed);
  return run_loop(ms, cfg, [&](SolverState& s) { sgd_step_general(s, ms, cfg, rng); });
}

RunResult run_spectral_gd(const SpectralOracle& oracle, const SymMatrix& a1,
                          const SolverConfig& cfg) {
  check_common(cfg);
  if (cfg.epsilon * cfg.lambda > 0.01 * (1.0 + 1e-12))
    throw InvalidInput("SolverConfig: spectral GD requires epsilon * lambda <= 0.01");
  if (cfg.lambda < 1.0)
    throw InvalidInput("SolverConfig: spectral GD requires lambda >= 1");
  if (a1.dim() != oracle.dim()) throw InvalidInput("run_spectral_gd: dim mismatch");

  const Index n = oracle.dim();
  SymMatrix a = a1;
  RunResult result;
  long t = 1;
  auto t0 = Clock::now();

  while (true) {
    SymMatrix x(cfg.lambda * (Matrix::Identity(n, n) - oracle.query(a).mat()));
    EigDecomp d = eig(x);

    double psi_val = 0.0, sinh_sq = 0.0, max_dev = 0.0;
    Vector sinh_vals(n);
    for (Index i = 0; i < n; ++i) {
      double xv = d.eigenvalues(i);
      if (std::abs(xv) > 700.0) {
        throw Overflow("run_spectral_gd: potential overflows; rescale lambda", i, xv);
      }
      psi_val += std::cosh(xv);
      sinh_vals(i) = std::sinh(xv);
      sinh_sq += sinh_vals(i) * sinh_vals(i);
      max_dev = std::max(max_dev, std::abs(xv) / cfg.lambda);
    }
    double sinh_norm = std::sqrt(sinh_sq);

    TraceRecord rec;
    rec.t = t;
    rec.phi = psi_val;
    rec.grad_norm = cfg.lambda * sinh_norm;
    rec.max_abs_residual = max_dev;
    rec.wall_nanos = t == 1 ? 0 : nanos_since(t0);
    t0 = Clock::now();
    if (cfg.log_every > 0 && (t - 1) % cfg.log_every == 0) {
      result.trace.records.push_back(rec);
    }

    bool stop = false;
    switch (cfg.stop_rule) {
      case StopRule::PotentialBelow:
        stop = psi_val <= cfg.stop_threshold;
        break;
      case StopRule::MaxResidualBelow:
        stop = max_dev <= cfg.delta;
        break;
      case StopRule::IterBudget:
        break;
    }
    if (stop || sinh_norm <= kStationaryTol) {
      result.status = RunStatus::Converged;
      break;
    }
    if (t > cfg.max_iters) {
      result.status = RunStatus::BudgetExceeded;
      break;
    }

    Matrix s = d.eigenvectors * sinh_vals.asDiagonal() * d.eigenvectors.transpose();
    Matrix dir = oracle.sqrt().mat() * s * oracle.sqrt().mat();
    a.add_symmetric((cfg.epsilon / sinh_norm) * dir);
    ++t;
  }

  result.solution = a;
  result.iterations = t - 1;
  return result;
}

VerifyResult verify_solution(const MeasurementSet& ms, const SymMatrix& a, double delta) {
  Vector z = residuals(ms, a);
  VerifyResult v;
  z.cwiseAbs().maxCoeff(&v.worst_index);
  v.max_residual = std::abs(z(v.worst_index));
  v.pass = v.max_residual <= delta;
  return v;
}

void ConvergenceTrace::write_csv(std::ostream& os) const {
  os << "t,phi,grad_norm,max_residual,wall_nanos,overflow,recompute\n";
  for (const auto& r : records) {
    os << r.t << ',' << r.phi << ',' << r.grad_norm << ',' << r.max_abs_residual << ','
       << r.wall_nanos << ',' << (r.overflow ? 1 : 0) << ',' << (r.recompute ? 1 : 0) << '\n';
  }
}

}  // namespace matsense

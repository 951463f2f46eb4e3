#pragma once

#include <random>

#include "matsense/potential.hpp"

namespace matsense {

enum class StopRule { PotentialBelow, MaxResidualBelow, IterBudget };

struct SolverConfig {
  double lambda = 1.0;
  double epsilon = 0.005;     // step scale (the step is unit-normalized)
  int batch = 1;              // B, SGD only
  long max_iters = 10000;     // T
  double delta = 0.1;         // target accuracy
  std::uint64_t seed = 0;
  StopRule stop_rule = StopRule::MaxResidualBelow;
  double stop_threshold = 0.0;  // PotentialBelow threshold
  long log_every = 1;
  long recompute_every = 512;  // re-derive maintained z; 0 disables
};

/// lambda = ln(6m)/delta, GD epsilon = 0.005/lambda, stop at Phi <= 3m.
/// With Phi <= 3m every residual satisfies |z_i| <= arccosh(3m)/lambda <= delta.
SolverConfig default_gd_schedule(const MeasurementSet& ms, double delta, long max_iters);
/// As default_gd_schedule with epsilon = 0.005 * B / (lambda * m).
SolverConfig default_sgd_schedule(const MeasurementSet& ms, double delta, int batch,
                                  long max_iters);
/// Spectral variant with m -> n: lambda = ln(6n)/delta, stop at Psi <= 3n.
SolverConfig default_spectral_schedule(int n, double delta, long max_iters);

struct SolverState {
  SymMatrix iterate;      // A_t
  Vector z;               // maintained residuals
  double grad_norm = 0.0;  // maintained, regime-appropriate
  long t = 1;
  bool grad_norm_clamped = false;  // general-regime quadratic form hit roundoff
};

/// A_1 = tau * I with tau = max_i b_i; residuals preprocessed in O(m n^2).
SymMatrix init_iterate(const MeasurementSet& ms);
SolverState make_state(const MeasurementSet& ms, const SolverConfig& cfg);

struct TraceRecord {
  long t = 0;
  double phi = 0.0;  // psi for the spectral solver
  double grad_norm = 0.0;
  double max_abs_residual = 0.0;
  long long wall_nanos = 0;
  bool overflow = false;
  bool recompute = false;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  void write_csv(std::ostream& os) const;
};

enum class RunStatus { Converged, BudgetExceeded };

struct RunResult {
  RunStatus status = RunStatus::Converged;
  SymMatrix solution;
  ConvergenceTrace trace;
  long iterations = 0;  // iterations actually performed
};

/// One full-gradient step A <- A - eps * grad/||grad||_F; z recomputed in
/// full (O(m n^2)). Throws AlreadyStationary when the gradient vanishes.
void gd_step(SolverState& state, const MeasurementSet& ms, const SolverConfig& cfg);
RunResult run_gd(const MeasurementSet& ms, const SolverConfig& cfg);

/// One stochastic step for orthogonal measurements: batch gradient
/// normalized by the FULL gradient norm (O(m) from maintained z); only
/// batch residuals change, via the closed-form recurrence. O(B n^2 + m).
void sgd_step_orthogonal(SolverState& state, const MeasurementSet& ms, const SolverConfig& cfg,
                         std::mt19937_64& rng);
RunResult run_sgd(const MeasurementSet& ms, const SolverConfig& cfg);

/// General-measurement stochastic step: every z_i moves by
/// sum_{j in batch} w_{i,j}^2 * coefficient_j. O(B n^2 + m^2 + m B).
void sgd_step_general(SolverState& state, const MeasurementSet& ms, const SolverConfig& cfg,
                      std::mt19937_64& rng);
RunResult run_sgd_general(const MeasurementSet& ms, const SolverConfig& cfg);

/// Descent on the spectral potential against the ground-truth oracle:
/// A <- A + eps * A*^{1/2} sinh(X) A*^{1/2} / ||sinh(X)||_F with
/// X = lambda (I - A*^{-1/2} A A*^{-1/2}).
RunResult run_spectral_gd(const SpectralOracle& oracle, const SymMatrix& a1,
                          const SolverConfig& cfg);

struct VerifyResult {
  bool pass = false;
  double max_residual = 0.0;
  Index worst_index = 0;
};

/// pass iff max_i |u_i^T a u_i - b_i| <= delta.
VerifyResult verify_solution(const MeasurementSet& ms, const SymMatrix& a, double delta);

/// Sample a size-B subset of [m] without replacement (Fisher-Yates prefix).
std::vector<int> sample_batch(int m, int batch, std::mt19937_64& rng);

}  // namespace matsense

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "matsense/linalg.hpp"

namespace matsense {

enum class Regime { Orthogonal, RhoBounded };

/// Ground-truth positive definite matrix A*.
struct GroundTruth {
  SymMatrix a_star;
};

/// The m sensing vectors u_i (unit norm), targets b_i, and structural
/// metadata. Immutable after construction except for the lazily filled
/// Gram cache w_{i,j} = <u_i, u_j>.
class MeasurementSet {
 public:
  /// Build from explicit vectors (columns of u). b must satisfy
  /// r_bound = max|b_i|; that field is recomputed here.
  static MeasurementSet from_vectors(Matrix u, Vector b, Regime regime, double rho = 0.0);

  Index n() const { return u_.rows(); }
  Index m() const { return u_.cols(); }
  const Matrix& u() const { return u_; }
  Vector u_col(Index i) const { return u_.col(i); }
  const Vector& b() const { return b_; }
  double r_bound() const { return r_bound_; }
  Regime regime() const { return regime_; }
  double rho() const { return rho_; }

  /// Gram cache, computed on first request for the orthogonal regime and
  /// eagerly at generation for the rho-bounded one.
  const Matrix& gram() const;
  bool has_gram() const { return gram_.has_value(); }

 private:
  Matrix u_;  // n x m, one column per measurement
  Vector b_;
  double r_bound_ = 0.0;
  Regime regime_ = Regime::Orthogonal;
  double rho_ = 0.0;
  mutable std::optional<Matrix> gram_;

  friend MeasurementSet gen_rho_bounded(int, int, double, const GroundTruth&, std::uint64_t);
};

struct SpectrumUniform {
  double lo;
  double hi;
};
struct SpectrumExplicit {
  std::vector<double> values;
};
using Spectrum = std::variant<SpectrumUniform, SpectrumExplicit>;

/// A* = Q diag(spectrum) Q^T with a seeded random orthogonal Q.
GroundTruth gen_ground_truth(int n, const Spectrum& spectrum, std::uint64_t seed);

/// First m columns of the Q factor of a seeded Gaussian matrix;
/// b_i = u_i^T A* u_i. Requires m <= n.
MeasurementSet gen_orthogonal(int n, int m, const GroundTruth& a_star, std::uint64_t seed);

/// m random unit vectors with pairwise |<u_i,u_j>| <= rho. Requires
/// rho <= 1/(10m). Throws GenerationFailed after 10,000 consecutive
/// rejections of a single vector.
MeasurementSet gen_rho_bounded(int n, int m, double rho, const GroundTruth& a_star,
                               std::uint64_t seed);

struct ValidationReport {
  struct Entry {
    std::string check;
    bool pass;
    std::string detail;  // worst offending pair/index when failing
  };
  std::vector<Entry> entries;
  bool all_pass() const;
};

/// Checks every MeasurementSet invariant; failures become report entries.
ValidationReport validate(const MeasurementSet& ms);

/// z_i = u_i^T a u_i - b_i for all i.
Vector residuals(const MeasurementSet& ms, const SymMatrix& a);

}  // namespace matsense

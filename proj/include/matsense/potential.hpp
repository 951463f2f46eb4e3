#pragma once

#include "matsense/measurements.hpp"

namespace matsense {

struct PotentialParams {
  double lambda = 1.0;  // temperature of the cosh potential

  PotentialParams() = default;
  explicit PotentialParams(double l) : lambda(l) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("lambda must be finite and > 0");
  }
};

/// Phi_lambda(A) = sum_i cosh(lambda * (u_i^T A u_i - b_i)). Throws Overflow
/// (with the offending index and residual) past the exp-safe range.
double phi(const MeasurementSet& ms, const SymMatrix& a, const PotentialParams& p);

/// log(Phi) from the residual vector, stable for any magnitude of lambda*z.
double log_phi(const Vector& z, const PotentialParams& p);

/// grad Phi = sum_i u_i u_i^T * lambda * sinh(lambda * z_i).
SymMatrix phi_grad(const MeasurementSet& ms, const SymMatrix& a, const PotentialParams& p);

/// ||grad Phi||_F for orthogonal measurements: lambda * (sum sinh^2(lambda z_i))^{1/2}.
/// O(m) arithmetic.
double grad_norm_orthogonal(const Vector& z, const PotentialParams& p);

/// ||grad Phi||_F for general measurements:
/// lambda * (sum_{i,j} w_{i,j}^2 sinh(lambda z_i) sinh(lambda z_j))^{1/2}.
/// O(m^2) arithmetic. A quadratic form negative only by roundoff is clamped
/// to 0 and reported through `clamped`.
double grad_norm_general(const Vector& z, const Matrix& gram, const PotentialParams& p,
                         bool* clamped = nullptr);

/// <grad^2 Phi, h (x) h> = sum_i lambda^2 cosh(lambda z_i) (u_i^T h u_i)^2.
/// Test-scale probe of the Kronecker Hessian; never the hot path.
double hessian_quadratic_form(const MeasurementSet& ms, const SymMatrix& a, const SymMatrix& h,
                              const PotentialParams& p);

/// sinh(lambda z_i) represented as values(i) * exp(log_scale), so ratios of
/// entries (all a normalized descent direction needs) never overflow.
struct ScaledSinh {
  Vector values;
  double log_scale = 0.0;
};
ScaledSinh scaled_sinh(const Vector& z, const PotentialParams& p);

/// Ground-truth oracle: caches A*^{1/2} and A*^{-1/2} at construction and
/// answers queries A*^{-1/2} A A*^{-1/2}.
class SpectralOracle {
 public:
  explicit SpectralOracle(GroundTruth gt);

  Index dim() const { return a_star_.a_star.dim(); }
  const SymMatrix& a_star() const { return a_star_.a_star; }
  const SymMatrix& sqrt() const { return sqrt_; }
  const SymMatrix& inv_sqrt() const { return inv_sqrt_; }

  SymMatrix query(const SymMatrix& a) const;

 private:
  GroundTruth a_star_;
  SymMatrix sqrt_;
  SymMatrix inv_sqrt_;
};

/// Psi_lambda(A) = tr[cosh(lambda (I - A*^{-1/2} A A*^{-1/2}))].
double psi(const SpectralOracle& oracle, const SymMatrix& a, const PotentialParams& p);

/// delta = max_i |1 - lambda_i(A*^{-1/2} A A*^{-1/2})|, certifying
/// (1-delta) A* <= A <= (1+delta) A* in the Loewner order.
double spectral_certificate(const SpectralOracle& oracle, const SymMatrix& a,
                            const PotentialParams& p);

}  // namespace matsense

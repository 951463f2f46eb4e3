#include "matsense/potential.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace matsense {

namespace {

constexpr double kExpSafe = 700.0;  // cosh/sinh overflow just past exp(709)

// log(cosh(x)), stable for any x.
double log_cosh(double x) {
  double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

}  // namespace

double phi(const MeasurementSet& ms, const SymMatrix& a, const PotentialParams& p) {
  Vector z = residuals(ms, a);
  double sum = 0.0;
  for (Index i = 0; i < z.size(); ++i) {
    double arg = p.lambda * z(i);
    if (std::abs(arg) > kExpSafe) {
      throw Overflow("phi: lambda * residual = " + std::to_string(arg) +
                         " exceeds the exp-safe range at measurement " + std::to_string(i),
                     i, z(i));
    }
    sum += std::cosh(arg);
  }
  return sum;
}

double log_phi(const Vector& z, const PotentialParams& p) {
  // logsumexp over log cosh(lambda z_i).
  double mx = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < z.size(); ++i) mx = std::max(mx, log_cosh(p.lambda * z(i)));
  double sum = 0.0;
  for (Index i = 0; i < z.size(); ++i) sum += std::exp(log_cosh(p.lambda * z(i)) - mx);
  return mx + std::log(sum);
}

ScaledSinh scaled_sinh(const Vector& z, const PotentialParams& p) {
  ScaledSinh out;
  out.values.resize(z.size());
  double mx = 0.0;
  for (Index i = 0; i < z.size(); ++i) mx = std::max(mx, p.lambda * std::abs(z(i)));
  out.log_scale = mx > kExpSafe / 2 ? mx - kExpSafe / 2 : 0.0;
  for (Index i = 0; i < z.size(); ++i) {
    double arg = p.lambda * z(i);
    double aa = std::abs(arg);
    // sinh(x) = sign(x) * exp(|x|) * (1 - exp(-2|x|)) / 2
    double v = std::exp(aa - out.log_scale) * (1.0 - std::exp(-2.0 * aa)) / 2.0;
    out.values(i) = arg < 0 ? -v : v;
  }
  return out;
}

SymMatrix phi_grad(const MeasurementSet& ms, const SymMatrix& a, const PotentialParams& p) {
  Vector z = residuals(ms, a);
  Vector s(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    double arg = p.lambda * z(i);
    if (std::abs(arg) > kExpSafe) {
      throw Overflow("phi_grad: lambda * residual exceeds the exp-safe range at measurement " +
                         std::to_string(i),
                     i, z(i));
    }
    s(i) = p.lambda * std::sinh(arg);
  }
  Matrix g = ms.u() * s.asDiagonal() * ms.u().transpose();
  return SymMatrix(std::move(g));
}

double grad_norm_orthogonal(const Vector& z, const PotentialParams& p) {
  ScaledSinh s = scaled_sinh(z, p);
  double norm = p.lambda * s.values.norm() * std::exp(s.log_scale);
  if (!std::isfinite(norm)) {
    throw Overflow("grad_norm_orthogonal: norm exceeds double range; rescale lambda");
  }
  return norm;
}

double grad_norm_general(const Vector& z, const Matrix& gram, const PotentialParams& p,
                         bool* clamped) {
  if (gram.rows() != z.size() || gram.cols() != z.size()) {
    throw InvalidInput("grad_norm_general: gram dims do not match residual vector");
  }
  if (clamped) *clamped = false;
  ScaledSinh s = scaled_sinh(z, p);
  double quad = s.values.dot(gram.cwiseProduct(gram) * s.values);
  if (quad < 0.0) {
    // Equals ||grad Phi||_F^2 >= 0 in exact arithmetic.
    if (clamped) *clamped = true;
    quad = 0.0;
  }
  double norm = p.lambda * std::sqrt(quad) * std::exp(s.log_scale);
  if (!std::isfinite(norm)) {
    throw Overflow("grad_norm_general: norm exceeds double range; rescale lambda");
  }
  return norm;
}

double hessian_quadratic_form(const MeasurementSet& ms, const SymMatrix& a, const SymMatrix& h,
                              const PotentialParams& p) {
  if (h.dim() != ms.n()) throw InvalidInput("hessian_quadratic_form: dims do not match");
  Vector z = residuals(ms, a);
  Matrix hu = h.mat() * ms.u();
  double sum = 0.0;
  for (Index i = 0; i < ms.m(); ++i) {
    double arg = p.lambda * z(i);
    if (std::abs(arg) > kExpSafe) {
      throw Overflow("hessian_quadratic_form: overflow at measurement " + std::to_string(i), i,
                     z(i));
    }
    double uhu = ms.u().col(i).dot(hu.col(i));
    sum += p.lambda * p.lambda * std::cosh(arg) * uhu * uhu;
  }
  return sum;
}

SpectralOracle::SpectralOracle(GroundTruth gt) : a_star_(std::move(gt)) {
  EigDecomp d = eig(a_star_.a_star);
  if (d.eigenvalues.minCoeff() <= 0.0) {
    throw InvalidInput("SpectralOracle: ground truth must be positive definite");
  }
  Vector sq = d.eigenvalues.cwiseSqrt();
  sqrt_ = SymMatrix(d.eigenvectors * sq.asDiagonal() * d.eigenvectors.transpose());
  inv_sqrt_ = SymMatrix(d.eigenvectors * sq.cwiseInverse().asDiagonal() *
                        d.eigenvectors.transpose());
}

SymMatrix SpectralOracle::query(const SymMatrix& a) const {
  if (a.dim() != dim()) throw InvalidInput("SpectralOracle::query: dim mismatch");
  return SymMatrix(inv_sqrt_.mat() * a.mat() * inv_sqrt_.mat());
}

double psi(const SpectralOracle& oracle, const SymMatrix& a, const PotentialParams& p) {
  SymMatrix c = oracle.query(a);
  SymMatrix x(p.lambda * (Matrix::Identity(c.dim(), c.dim()) - c.mat()));
  return tr_cosh(x);
}

double spectral_certificate(const SpectralOracle& oracle, const SymMatrix& a,
                            const PotentialParams& p) {
  (void)p;
  SymMatrix c = oracle.query(a);
  EigDecomp d = eig(c);
  double delta = 0.0;
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    delta = std::max(delta, std::abs(1.0 - d.eigenvalues(i)));
  }
  return delta;
}

}  // namespace matsense

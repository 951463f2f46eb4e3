#pragma once

#include <Eigen/Dense>
#include <functional>

#include "matsense/errors.hpp"

namespace matsense {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense real symmetric matrix. The constructor symmetrizes via (M + M^T)/2
/// and rejects non-finite entries, so every instance satisfies
/// entries(i,j) == entries(j,i) exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Matrix m);

  static SymMatrix identity(Index n);
  static SymMatrix zero(Index n);
  /// Scaled identity tau * I.
  static SymMatrix scaled_identity(Index n, double tau);

  Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }
  double operator()(Index i, Index j) const { return mat_(i, j); }

  double frobenius_norm() const { return mat_.norm(); }
  double trace() const { return mat_.trace(); }

  /// In-place mat += (d + d^T)/2 in a single triangular pass, preserving
  /// exact symmetry without the constructor's full re-symmetrization.
  void add_symmetric(const Matrix& d);

  /// In-place mat += u diag(coef) u^T computed on the upper triangle only
  /// (SYRK) and mirrored, so symmetry stays exact without materializing the
  /// n x n update. u is n x k with one column per coefficient.
  void rank_update(const Matrix& u, const Vector& coef);

  SymMatrix operator+(const SymMatrix& o) const { return SymMatrix(mat_ + o.mat_); }
  SymMatrix operator-(const SymMatrix& o) const { return SymMatrix(mat_ - o.mat_); }
  SymMatrix operator*(double s) const { return SymMatrix(mat_ * s); }

 private:
  Matrix mat_;
};

/// Eigendecomposition A = Q diag(lambda) Q^T with eigenvalues sorted
/// descending and orthogonal Q (columns are eigenvectors).
struct EigDecomp {
  Vector eigenvalues;
  Matrix eigenvectors;
};

EigDecomp eig(const SymMatrix& a);

/// f(A) = Q f(Lambda) Q^T. Throws Overflow if f is non-finite on some
/// eigenvalue, naming the offending eigenvalue.
SymMatrix matrix_fn(const SymMatrix& a, const std::function<double(double)>& f);

/// tr[cosh(A)]. Always >= n and >= cosh(||A||_2).
double tr_cosh(const SymMatrix& a);

/// 1 + log(tr[cosh(A)]), an upper bound on the spectral norm of A.
double spectral_norm_bound(const SymMatrix& a);

/// Kronecker product. Test-scale only (powers the brute-force Hessian
/// oracle); dims <= 64.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace matsense

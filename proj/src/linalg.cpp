#include "matsense/linalg.hpp"

#include <cmath>
#include <string>

namespace matsense {

SymMatrix::SymMatrix(Matrix m) {
  if (m.rows() != m.cols()) {
    throw InvalidInput("SymMatrix requires a square matrix, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw InvalidInput("SymMatrix requires finite entries");
  }
  mat_ = 0.5 * (m + m.transpose().eval());
  // Canonical storage: mirror the lower triangle so (i,j) == (j,i) bitwise.
  for (Index i = 0; i < mat_.rows(); ++i)
    for (Index j = 0; j < i; ++j) mat_(j, i) = mat_(i, j);
}

void SymMatrix::add_symmetric(const Matrix& d) {
  if (d.rows() != mat_.rows() || d.cols() != mat_.cols()) {
    throw InvalidInput("add_symmetric: dimension mismatch");
  }
  const Index n = mat_.rows();
  // Finiteness is checked on the updated entries inside the same pass: a
  // non-finite input produces a non-finite sum (inf - inf is NaN), so this
  // catches everything a separate scan of d would, without touching the
  // matrix a second time.
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      double v = mat_(i, j) + 0.5 * (d(i, j) + d(j, i));
      if (!std::isfinite(v)) {
        throw InvalidInput("add_symmetric: non-finite update");
      }
      mat_(i, j) = v;
      mat_(j, i) = v;
    }
  }
}

void SymMatrix::rank_update(const Matrix& u, const Vector& coef) {
  if (u.rows() != mat_.rows() || u.cols() != coef.size()) {
    throw InvalidInput("rank_update: dimension mismatch");
  }
  if (!u.allFinite() || !coef.allFinite()) {
    throw InvalidInput("rank_update: non-finite update");
  }
  const Index n = mat_.rows();
  const Index k = coef.size();
  // rankUpdate takes one scalar weight, so split the columns by coefficient
  // sign and fold |coef| into the columns as sqrt factors.
  Index np = 0, nn = 0;
  for (Index j = 0; j < k; ++j) (coef(j) > 0.0 ? np : nn) += (coef(j) != 0.0);
  Matrix up(n, np), un(n, nn);
  Index ip = 0, in = 0;
  for (Index j = 0; j < k; ++j) {
    if (coef(j) > 0.0) {
      up.col(ip++) = std::sqrt(coef(j)) * u.col(j);
    } else if (coef(j) < 0.0) {
      un.col(in++) = std::sqrt(-coef(j)) * u.col(j);
    }
  }
  auto view = mat_.selfadjointView<Eigen::Upper>();
  if (np > 0) view.rankUpdate(up, 1.0);
  if (nn > 0) view.rankUpdate(un, -1.0);
  mat_.triangularView<Eigen::StrictlyLower>() =
      mat_.triangularView<Eigen::StrictlyUpper>().transpose();
  if (!mat_.allFinite()) throw InvalidInput("rank_update: non-finite result");
}

SymMatrix SymMatrix::identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }
SymMatrix SymMatrix::zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }
SymMatrix SymMatrix::scaled_identity(Index n, double tau) {
  return SymMatrix(tau * Matrix::Identity(n, n));
}

EigDecomp eig(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("eigendecomposition failed to converge");
  }
  // Eigen sorts ascending; flip to descending.
  const Index n = a.dim();
  EigDecomp d;
  d.eigenvalues = solver.eigenvalues().reverse();
  d.eigenvectors = solver.eigenvectors().rowwise().reverse();
  (void)n;
  return d;
}

SymMatrix matrix_fn(const SymMatrix& a, const std::function<double(double)>& f) {
  EigDecomp d = eig(a);
  Vector fv(d.eigenvalues.size());
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    fv(i) = f(d.eigenvalues(i));
    if (!std::isfinite(fv(i))) {
      throw Overflow("matrix_fn: f overflows on eigenvalue " +
                         std::to_string(d.eigenvalues(i)),
                     i, d.eigenvalues(i));
    }
  }
  return SymMatrix(d.eigenvectors * fv.asDiagonal() * d.eigenvectors.transpose());
}

double tr_cosh(const SymMatrix& a) {
  EigDecomp d = eig(a);
  double sum = 0.0;
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    double c = std::cosh(d.eigenvalues(i));
    if (!std::isfinite(c)) {
      throw Overflow("tr_cosh: cosh overflows on eigenvalue " +
                         std::to_string(d.eigenvalues(i)) + "; rescale lambda",
                     i, d.eigenvalues(i));
    }
    sum += c;
  }
  return sum;
}

double spectral_norm_bound(const SymMatrix& a) {
  return 1.0 + std::log(tr_cosh(a));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  if (!a.allFinite() || !b.allFinite()) {
    throw InvalidInput("kron requires finite entries");
  }
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace matsense

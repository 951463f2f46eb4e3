#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "matsense/linalg.hpp"
#include "test_helpers.hpp"

using namespace matsense;
using test::random_matrix;
using test::random_symmetric;

namespace {

// Truncated series sum_{k=0}^{19} A^{2k} / (2k)!, an eig-free cosh oracle.
Matrix cosh_series(const Matrix& a) {
  Matrix a2 = a * a;
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 20; ++k) {
    term = term * a2 / ((2.0 * k - 1.0) * (2.0 * k));
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("SymMatrix construction") {
  Matrix m(2, 2);
  m << 1.0, 3.0, 1.0, 2.0;
  SymMatrix a(m);
  CHECK(a(0, 1) == a(1, 0));
  CHECK(a(0, 1) == doctest::Approx(2.0));

  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(SymMatrix{m}, InvalidInput);
  CHECK_THROWS_AS(SymMatrix{Matrix::Zero(2, 3)}, InvalidInput);
}

TEST_CASE("SymMatrix in-place updates match explicit construction") {
  std::mt19937_64 rng(23);
  SymMatrix a(random_symmetric(12, rng));

  Matrix d = random_matrix(12, 12, rng);
  SymMatrix via_ctor(a.mat() + 0.5 * (d + d.transpose()));
  SymMatrix b = a;
  b.add_symmetric(d);
  CHECK((b.mat() - via_ctor.mat()).norm() < 1e-12);
  for (Index i = 0; i < 12; ++i)
    for (Index j = 0; j < i; ++j) CHECK(b(i, j) == b(j, i));
  CHECK_THROWS_AS(b.add_symmetric(Matrix::Zero(3, 3)), InvalidInput);
  Matrix bad = Matrix::Zero(12, 12);
  bad(4, 7) = std::nan("");
  CHECK_THROWS_AS(b.add_symmetric(bad), InvalidInput);

  Matrix u = random_matrix(12, 5, rng);
  Vector coef(5);
  coef << 0.7, -1.3, 0.0, 2.1, -0.4;
  SymMatrix expect(a.mat() + u * coef.asDiagonal() * u.transpose());
  SymMatrix c = a;
  c.rank_update(u, coef);
  CHECK((c.mat() - expect.mat()).norm() / expect.mat().norm() < 1e-12);
  for (Index i = 0; i < 12; ++i)
    for (Index j = 0; j < i; ++j) CHECK(c(i, j) == c(j, i));
  CHECK_THROWS_AS(c.rank_update(u, Vector::Ones(4)), InvalidInput);
  u(0, 0) = std::nan("");
  CHECK_THROWS_AS(c.rank_update(u, coef), InvalidInput);
}

TEST_CASE("eig: diagonal input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  EigDecomp d = eig(SymMatrix(m));
  CHECK(d.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(1.0));
  CHECK((d.eigenvectors.cwiseAbs() - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("eig: symmetry-forced 2x2") {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  EigDecomp d = eig(SymMatrix(m));
  CHECK(d.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(-1.0));
  double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(std::abs(d.eigenvectors(0, 0)) - s) < 1e-12);
  CHECK(std::abs(std::abs(d.eigenvectors(1, 0)) - s) < 1e-12);
}

TEST_CASE("eig: reconstruction and orthogonality on random 8x8") {
  std::mt19937_64 rng(7);
  SymMatrix a(random_symmetric(8, rng));
  EigDecomp d = eig(a);
  const Matrix& q = d.eigenvectors;
  CHECK((q * q.transpose() - Matrix::Identity(8, 8)).norm() < 1e-10);
  Matrix rec = q * d.eigenvalues.asDiagonal() * q.transpose();
  CHECK((rec - a.mat()).norm() / a.mat().norm() < 1e-9);
  for (Index i = 1; i < 8; ++i) CHECK(d.eigenvalues(i - 1) >= d.eigenvalues(i));
}

TEST_CASE("eig: deterministic for fixed input") {
  std::mt19937_64 rng(11);
  SymMatrix a(random_symmetric(6, rng));
  EigDecomp d1 = eig(a);
  EigDecomp d2 = eig(a);
  CHECK(d1.eigenvalues == d2.eigenvalues);
  CHECK(d1.eigenvectors == d2.eigenvectors);
}

TEST_CASE("matrix_fn: cosh of zero is identity") {
  SymMatrix r = matrix_fn(SymMatrix::zero(4), [](double x) { return std::cosh(x); });
  CHECK((r.mat() - Matrix::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("matrix_fn: sinh of diag(1,-1)") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  SymMatrix r = matrix_fn(SymMatrix(m), [](double x) { return std::sinh(x); });
  CHECK(r(0, 0) == doctest::Approx(std::sinh(1.0)));
  CHECK(r(1, 1) == doctest::Approx(-std::sinh(1.0)));
  CHECK(std::abs(r(0, 1)) < 1e-14);
}

TEST_CASE("matrix_fn: cosh matches the series oracle") {
  std::mt19937_64 rng(21);
  SymMatrix a(random_symmetric(6, rng, 0.5));
  SymMatrix c = matrix_fn(a, [](double x) { return std::cosh(x); });
  CHECK((c.mat() - cosh_series(a.mat())).norm() < 1e-8);
}

TEST_CASE("matrix_fn: commutes with orthogonal conjugation") {
  std::mt19937_64 rng(22);
  SymMatrix a(random_symmetric(5, rng));
  Matrix q = eig(SymMatrix(random_symmetric(5, rng))).eigenvectors;
  auto f = [](double x) { return std::tanh(x); };
  SymMatrix lhs = matrix_fn(SymMatrix(q * a.mat() * q.transpose()), f);
  Matrix rhs = q * matrix_fn(a, f).mat() * q.transpose();
  CHECK((lhs.mat() - rhs).norm() < 1e-8);
}

TEST_CASE("matrix_fn: overflow names the eigenvalue") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 800.0;
  try {
    matrix_fn(SymMatrix(m), [](double x) { return std::exp(x); });
    FAIL("expected Overflow");
  } catch (const Overflow& e) {
    CHECK(e.value() == doctest::Approx(800.0));
  }
}

TEST_CASE("tr_cosh") {
  CHECK(tr_cosh(SymMatrix::zero(3)) == doctest::Approx(3.0));

  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  CHECK(tr_cosh(SymMatrix(m)) == doctest::Approx(std::cosh(1.0) + 1.0));

  std::mt19937_64 rng(31);
  SymMatrix a(random_symmetric(5, rng));
  double spec = eig(a).eigenvalues.cwiseAbs().maxCoeff();
  CHECK(tr_cosh(a) >= std::cosh(spec) - 1e-12);
  CHECK(tr_cosh(a) >= 5.0);

  Matrix big = Matrix::Zero(2, 2);
  big(0, 0) = 720.0;
  CHECK_THROWS_AS(tr_cosh(SymMatrix(big)), Overflow);
}

TEST_CASE("spectral_norm_bound") {
  CHECK(spectral_norm_bound(SymMatrix::zero(4)) == doctest::Approx(1.0 + std::log(4.0)));

  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 5.0;
  double bound = spectral_norm_bound(SymMatrix(m));
  CHECK(bound == doctest::Approx(1.0 + std::log(std::cosh(5.0) + 2.0)));
  CHECK(bound >= 5.0);

  std::mt19937_64 rng(41);
  SymMatrix a(random_symmetric(4, rng));
  CHECK(spectral_norm_bound(a) >= eig(a).eigenvalues.cwiseAbs().maxCoeff());
}

TEST_CASE("kron: identities and block structure") {
  CHECK((kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) - Matrix::Identity(4, 4))
            .norm() < 1e-15);

  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  Matrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  Matrix k = kron(e11, swap);
  CHECK(k.rows() == 4);
  CHECK((k.block(0, 0, 2, 2) - swap).norm() < 1e-15);
  CHECK(k.block(2, 2, 2, 2).norm() < 1e-15);
  CHECK(k.block(0, 2, 2, 2).norm() < 1e-15);
}

TEST_CASE("kron: mixed-product property") {
  std::mt19937_64 rng(51);
  Matrix a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng);
  Matrix c = random_matrix(3, 3, rng), d = random_matrix(3, 3, rng);
  CHECK((kron(a, b) * kron(c, d) - kron(a * c, b * d)).norm() < 1e-10);
}

TEST_CASE("hyperbolic identity: scalar") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    double x = u(rng);
    double lhs = std::cosh(x) * std::cosh(x) - std::sinh(x) * std::sinh(x);
    CHECK(std::abs(lhs - 1.0) / (std::cosh(x) * std::cosh(x)) < 1e-9);
  }
}

TEST_CASE("hyperbolic identity: cosh^2(A) - sinh^2(A) = I") {
  std::mt19937_64 rng(62);
  for (int rep = 0; rep < 20; ++rep) {
    SymMatrix a(random_symmetric(6, rng, 0.4));
    Matrix c = matrix_fn(a, [](double x) { return std::cosh(x); }).mat();
    Matrix s = matrix_fn(a, [](double x) { return std::sinh(x); }).mat();
    CHECK((c * c - s * s - Matrix::Identity(6, 6)).norm() < 1e-8);
  }
}

TEST_CASE("scalar-list and trace inequalities") {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 50; ++rep) {
    int n = 2 + static_cast<int>(rng() % 10);
    double cosh_sq = 0.0, sinh_sq = 0.0, cosh_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = g(rng);
      cosh_sq += std::cosh(x) * std::cosh(x);
      sinh_sq += std::sinh(x) * std::sinh(x);
      cosh_sum += std::cosh(x);
    }
    double rn = std::sqrt(static_cast<double>(n));
    CHECK(std::sqrt(cosh_sq) <= rn + std::sqrt(sinh_sq) + 1e-9);
    CHECK(std::sqrt(sinh_sq) >= (cosh_sum - n) / rn - 1e-9);

    SymMatrix a(random_symmetric(n, rng));
    double tc2 = (matrix_fn(a, [](double x) { return std::cosh(x); }).mat() *
                  matrix_fn(a, [](double x) { return std::cosh(x); }).mat())
                     .trace();
    double ts2 = (matrix_fn(a, [](double x) { return std::sinh(x); }).mat() *
                  matrix_fn(a, [](double x) { return std::sinh(x); }).mat())
                     .trace();
    CHECK(std::sqrt(tc2) <= rn + std::sqrt(ts2) + 1e-9);
    CHECK(std::sqrt(ts2) >= (tr_cosh(a) - n) / rn - 1e-9);
  }
}

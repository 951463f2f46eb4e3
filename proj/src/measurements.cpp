#include "matsense/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace matsense {

namespace {

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
  return g;
}

/// Q factor of a Gaussian matrix with a sign convention (positive diagonal
/// of R) so the draw is deterministic per seed.
Matrix haar_orthogonal(Index n, Index m, std::mt19937_64& rng) {
  Matrix g = gaussian_matrix(n, m, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, m);
  Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  for (Index j = 0; j < m; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

Vector measure(const Matrix& u, const SymMatrix& a_star) {
  Matrix au = a_star.mat() * u;
  Vector b(u.cols());
  for (Index i = 0; i < u.cols(); ++i) b(i) = u.col(i).dot(au.col(i));
  return b;
}

}  // namespace

MeasurementSet MeasurementSet::from_vectors(Matrix u, Vector b, Regime regime, double rho) {
  if (u.cols() != b.size()) {
    throw InvalidInput("from_vectors: u has " + std::to_string(u.cols()) +
                       " columns but b has " + std::to_string(b.size()) + " entries");
  }
  if (u.cols() < 1) throw InvalidInput("from_vectors: need at least one measurement");
  if (!u.allFinite() || !b.allFinite()) throw InvalidInput("from_vectors: non-finite input");
  MeasurementSet ms;
  ms.u_ = std::move(u);
  ms.b_ = std::move(b);
  ms.r_bound_ = ms.b_.cwiseAbs().maxCoeff();
  ms.regime_ = regime;
  ms.rho_ = rho;
  return ms;
}

const Matrix& MeasurementSet::gram() const {
  if (!gram_) gram_ = u_.transpose() * u_;
  return *gram_;
}

GroundTruth gen_ground_truth(int n, const Spectrum& spectrum, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("gen_ground_truth: n must be positive");
  Vector lam(n);
  if (const auto* uni = std::get_if<SpectrumUniform>(&spectrum)) {
    if (uni->lo <= 0.0 || uni->hi < uni->lo) {
      throw InvalidInput("gen_ground_truth: uniform spectrum needs 0 < lo <= hi");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(uni->lo, uni->hi);
    for (int i = 0; i < n; ++i) lam(i) = dist(rng);
    std::mt19937_64 rng_q(seed + 0x9e3779b97f4a7c15ULL);
    Matrix q = haar_orthogonal(n, n, rng_q);
    return GroundTruth{SymMatrix(q * lam.asDiagonal() * q.transpose())};
  }
  const auto& ex = std::get<SpectrumExplicit>(spectrum);
  if (static_cast<int>(ex.values.size()) != n) {
    throw InvalidInput("gen_ground_truth: explicit spectrum size != n");
  }
  for (double v : ex.values) {
    if (v <= 0.0) throw InvalidInput("gen_ground_truth: spectrum must be positive");
  }
  for (int i = 0; i < n; ++i) lam(i) = ex.values[i];
  std::mt19937_64 rng_q(seed + 0x9e3779b97f4a7c15ULL);
  Matrix q = haar_orthogonal(n, n, rng_q);
  return GroundTruth{SymMatrix(q * lam.asDiagonal() * q.transpose())};
}

MeasurementSet gen_orthogonal(int n, int m, const GroundTruth& a_star, std::uint64_t seed) {
  if (m > n) {
    throw InvalidInput("gen_orthogonal: m > n (cannot have more than n orthogonal vectors)");
  }
  if (m < 1) throw InvalidInput("gen_orthogonal: m must be positive");
  if (a_star.a_star.dim() != n) throw InvalidInput("gen_orthogonal: ground truth dim != n");
  std::mt19937_64 rng(seed);
  Matrix u = haar_orthogonal(n, m, rng);
  Vector b = measure(u, a_star.a_star);
  return MeasurementSet::from_vectors(std::move(u), std::move(b), Regime::Orthogonal);
}

MeasurementSet gen_rho_bounded(int n, int m, double rho, const GroundTruth& a_star,
                               std::uint64_t seed) {
  if (m < 1) throw InvalidInput("gen_rho_bounded: m must be positive");
  if (rho > 1.0 / (10.0 * m)) {
    throw InvalidInput("gen_rho_bounded: rho must satisfy rho <= 1/(10m)");
  }
  if (a_star.a_star.dim() != n) throw InvalidInput("gen_rho_bounded: ground truth dim != n");

  constexpr int kRetryBudget = 10000;
  std::mt19937_64 rng(seed);

  // Random unit vectors straight from a Gaussian draw have pairwise inner
  // products of size ~1/sqrt(n), which for rho <= 1/(10m) is almost never
  // small enough at practical n. Instead, when m <= n, each vector is a
  // column of a seeded orthonormal frame plus a small Gaussian perturbation
  // sized so the rho bound holds with high probability; the rejection loop
  // below still enforces the bound exactly. For m > n no base frame exists
  // and plain unit-vector rejection runs until the budget trips.
  Matrix base;
  double eta = 0.0;
  if (m <= n) {
    base = haar_orthogonal(n, m, rng);
    eta = std::min(0.2, rho * std::sqrt(static_cast<double>(n)) / 4.0);
  }

  Matrix u(n, m);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < m; ++i) {
    int rejections = 0;
    for (;;) {
      Vector cand(n);
      for (Index k = 0; k < n; ++k) cand(k) = normal(rng);
      if (m <= n) {
        cand = base.col(i) + eta * cand.normalized();
      }
      cand.normalize();
      bool ok = true;
      for (int j = 0; j < i; ++j) {
        if (std::abs(cand.dot(u.col(j))) > rho) {
          ok = false;
          break;
        }
      }
      if (ok) {
        u.col(i) = cand;
        break;
      }
      if (++rejections >= kRetryBudget) {
        throw GenerationFailed("gen_rho_bounded: " + std::to_string(kRetryBudget) +
                               " consecutive rejections at vector " + std::to_string(i) +
                               " (n too small for this (m, rho))");
      }
    }
  }

  Vector b = measure(u, a_star.a_star);
  MeasurementSet ms =
      MeasurementSet::from_vectors(std::move(u), std::move(b), Regime::RhoBounded, rho);
  ms.gram();  // eager cache; the general-measurement inner loop needs it
  return ms;
}

bool ValidationReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const Entry& e) { return e.pass; });
}

ValidationReport validate(const MeasurementSet& ms) {
  ValidationReport rep;
  const Index m = ms.m();

  {
    double worst = 0.0;
    Index worst_i = 0;
    for (Index i = 0; i < m; ++i) {
      double err = std::abs(ms.u().col(i).norm() - 1.0);
      if (err > worst) {
        worst = err;
        worst_i = i;
      }
    }
    rep.entries.push_back({"unit_norm", worst <= 1e-10,
                           "worst index " + std::to_string(worst_i) + ", |norm-1| = " +
                               std::to_string(worst)});
  }

  {
    double bound = ms.regime() == Regime::Orthogonal ? 1e-10 : ms.rho();
    double worst = 0.0;
    Index wi = 0, wj = 0;
    for (Index i = 0; i < m; ++i)
      for (Index j = i + 1; j < m; ++j) {
        double d = std::abs(ms.u().col(i).dot(ms.u().col(j)));
        if (d > worst) {
          worst = d;
          wi = i;
          wj = j;
        }
      }
    std::string name = ms.regime() == Regime::Orthogonal ? "orthogonality" : "rho_bound";
    rep.entries.push_back({name, worst <= bound,
                           "worst pair (" + std::to_string(wi) + "," + std::to_string(wj) +
                               "), |<u_i,u_j>| = " + std::to_string(worst)});
  }

  if (ms.regime() == Regime::RhoBounded) {
    bool ok = ms.rho() <= 1.0 / (10.0 * static_cast<double>(m));
    rep.entries.push_back({"rho_le_1_over_10m", ok, "rho = " + std::to_string(ms.rho())});
  }

  {
    double actual = ms.b().cwiseAbs().maxCoeff();
    bool ok = actual == ms.r_bound();
    rep.entries.push_back({"r_bound", ok,
                           "stored " + std::to_string(ms.r_bound()) + ", actual " +
                               std::to_string(actual)});
  }

  if (ms.has_gram()) {
    Matrix fresh = ms.u().transpose() * ms.u();
    double worst = (fresh - ms.gram()).cwiseAbs().maxCoeff();
    rep.entries.push_back({"gram_cache", worst <= 1e-12,
                           "max entry deviation " + std::to_string(worst)});
  }

  return rep;
}

Vector residuals(const MeasurementSet& ms, const SymMatrix& a) {
  if (a.dim() != ms.n()) {
    throw InvalidInput("residuals: matrix dim " + std::to_string(a.dim()) +
                       " != instance dim " + std::to_string(ms.n()));
  }
  Matrix au = a.mat() * ms.u();
  Vector z(ms.m());
  for (Index i = 0; i < ms.m(); ++i) z(i) = ms.u().col(i).dot(au.col(i)) - ms.b()(i);
  return z;
}

}  // namespace matsense

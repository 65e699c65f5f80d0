#include "jetcheck/sigma.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <span>

#include "jetcheck/error.hpp"

namespace jetcheck {

namespace {

/// Gram-Schmidt with one re-orthogonalization pass; drops columns whose
/// residual falls below tol relative to their original norm.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& vectors, double tol = 1e-10) {
  Eigen::MatrixXd out(vectors.rows(), 0);
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::VectorXd v = vectors.col(j);
    const double original = v.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < out.cols(); ++k) v -= out.col(k).dot(v) * out.col(k);
    const double residual = v.norm();
    if (residual <= tol * original) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v / residual;
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_point(const Eigen::VectorXd& x, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    std::uint64_t bits;
    const double v = x(i);
    std::memcpy(&bits, &v, sizeof bits);
    h = splitmix64(h ^ bits);
  }
  return h;
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

std::string to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::Origin: return "origin";
    case SigmaKind::LinearSubspace: return "linear_subspace";
    case SigmaKind::PolynomialZeroSet: return "polynomial_zero_set";
  }
  return "unknown";
}

SigmaSet SigmaSet::origin(std::size_t n) {
  if (n == 0) throw InputError("ambient dimension must be positive");
  SigmaSet s;
  s.kind_ = SigmaKind::Origin;
  s.n_ = n;
  s.basis_ = Eigen::MatrixXd(static_cast<Eigen::Index>(n), 0);
  s.build_normal_basis();
  return s;
}

SigmaSet SigmaSet::linear_subspace(const Eigen::MatrixXd& spanning) {
  if (spanning.rows() == 0) throw InputError("ambient dimension must be positive");
  if (!spanning.allFinite()) throw InputError("subspace basis has non-finite entries");
  SigmaSet s;
  s.kind_ = SigmaKind::LinearSubspace;
  s.n_ = static_cast<std::size_t>(spanning.rows());
  s.basis_ = orthonormalize(spanning);
  if (static_cast<std::size_t>(s.basis_.cols()) == s.n_)
    throw InputError("Sigma spans all of R^n; 0 must be an accumulation point of the complement");
  s.build_normal_basis();
  return s;
}

SigmaSet SigmaSet::polynomial_zero_set(std::vector<RealPolynomial> polys, ProjectionOptions options) {
  if (polys.empty()) throw InputError("polynomial Sigma needs at least one defining polynomial");
  const std::size_t n = polys.front().nvars();
  if (n == 0) throw InputError("ambient dimension must be positive");
  SigmaSet s;
  s.kind_ = SigmaKind::PolynomialZeroSet;
  s.n_ = n;
  s.options_ = options;
  s.basis_ = Eigen::MatrixXd(static_cast<Eigen::Index>(n), 0);
  s.normal_ = Eigen::MatrixXd(static_cast<Eigen::Index>(n), 0);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].nvars() != n) throw InputError("defining polynomials have different arities");
    if (polys[i].constant_term() != 0.0)
      throw InputError("defining polynomial " + std::to_string(i + 1) + " does not vanish at 0");
    if (polys[i].is_zero()) {
      s.warnings_.push_back("defining polynomial " + std::to_string(i + 1) + " is identically zero and was ignored");
      continue;
    }
    ++nonzero;
    s.polys_.push_back(polys[i]);
  }
  if (nonzero == 0) throw InputError("Sigma spans all of R^n (every defining polynomial is zero)");
  for (const auto& p : s.polys_) {
    std::vector<RealPolynomial> grad;
    for (std::size_t j = 0; j < n; ++j) grad.push_back(p.derivative(j));
    s.gradients_.push_back(std::move(grad));
  }
  return s;
}

void SigmaSet::build_normal_basis() {
  const auto n = static_cast<Eigen::Index>(n_);
  normal_ = Eigen::MatrixXd(n, 0);
  Eigen::MatrixXd chosen = basis_;
  const Eigen::Index target = n - basis_.cols();
  std::vector<bool> used(n_, false);
  while (normal_.cols() < target) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    Eigen::VectorXd best_vec;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      Eigen::VectorXd v = Eigen::VectorXd::Unit(n, i);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index k = 0; k < chosen.cols(); ++k) v -= chosen.col(k).dot(v) * chosen.col(k);
      const double r = v.norm();
      if (r > best_norm + 1e-12) {
        best_norm = r;
        best = i;
        best_vec = v;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    best_vec /= best_norm;
    // Exact zeros for axis-aligned cases.
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(best_vec(i)) < 1e-15) best_vec(i) = 0.0;
    normal_.conservativeResize(Eigen::NoChange, normal_.cols() + 1);
    normal_.col(normal_.cols() - 1) = best_vec;
    chosen.conservativeResize(Eigen::NoChange, chosen.cols() + 1);
    chosen.col(chosen.cols() - 1) = best_vec;
  }
}

SigmaSet SigmaSet::transformed(const Eigen::MatrixXd& q) const {
  const auto n = static_cast<Eigen::Index>(n_);
  if (q.rows() != n || q.cols() != n) throw InputError("transformation must be n x n");
  switch (kind_) {
    case SigmaKind::Origin:
      return *this;
    case SigmaKind::LinearSubspace:
      return linear_subspace(q * basis_);
    case SigmaKind::PolynomialZeroSet: {
      // z in Q Sigma  <=>  P(Q^T z) = 0.
      std::vector<RealPolynomial> polys;
      for (const auto& p : polys_) polys.push_back(compose_linear(p, q.transpose()));
      return polynomial_zero_set(std::move(polys), options_);
    }
  }
  return *this;
}

std::string SigmaSet::describe() const {
  switch (kind_) {
    case SigmaKind::Origin:
      return "origin in R^" + std::to_string(n_);
    case SigmaKind::LinearSubspace:
      return std::to_string(basis_.cols()) + "-dimensional linear subspace of R^" + std::to_string(n_);
    case SigmaKind::PolynomialZeroSet: {
      std::string out = "zero set of {";
      for (std::size_t i = 0; i < polys_.size(); ++i) {
        if (i) out += ", ";
        out += polys_[i].to_string();
      }
      return out + "} in R^" + std::to_string(n_);
    }
  }
  return "";
}

struct ZeroSetProjector {
  const SigmaSet& s;

  Eigen::VectorXd values(const Eigen::VectorXd& z) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(s.polys_.size()));
    for (std::size_t i = 0; i < s.polys_.size(); ++i) v(static_cast<Eigen::Index>(i)) = s.polys_[i].evaluate(as_span(z));
    return v;
  }

  Eigen::MatrixXd gradients(const Eigen::VectorXd& z) const {
    Eigen::MatrixXd g(static_cast<Eigen::Index>(s.polys_.size()), static_cast<Eigen::Index>(s.n_));
    for (std::size_t i = 0; i < s.polys_.size(); ++i)
      for (std::size_t j = 0; j < s.n_; ++j)
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s.gradients_[i][j].evaluate(as_span(z));
    return g;
  }

  /// Levenberg-Marquardt on |z - x|^2 + mu |P(z)|^2.
  Eigen::VectorXd penalty_minimize(const Eigen::VectorXd& x, Eigen::VectorXd z, double mu) const {
    const double sqrt_mu = std::sqrt(mu);
    const auto n = static_cast<Eigen::Index>(s.n_);
    auto objective = [&](const Eigen::VectorXd& w) { return (w - x).squaredNorm() + mu * values(w).squaredNorm(); };
    double phi = objective(z);
    double lambda = 1e-3;
    for (int it = 0; it < s.options_.inner_iterations; ++it) {
      const Eigen::VectorXd p = values(z);
      const Eigen::MatrixXd g = gradients(z);
      const Eigen::MatrixXd jtj = Eigen::MatrixXd::Identity(n, n) + mu * g.transpose() * g;
      const Eigen::VectorXd jtr = (z - x) + sqrt_mu * sqrt_mu * g.transpose() * p;
      bool accepted = false;
      for (int tries = 0; tries < 12 && !accepted; ++tries) {
        Eigen::MatrixXd damped = jtj;
        damped.diagonal().array() += lambda * jtj.diagonal().array();
        const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
        const Eigen::VectorXd trial = z + step;
        const double trial_phi = objective(trial);
        if (std::isfinite(trial_phi) && trial_phi < phi) {
          const double move = step.norm();
          z = trial;
          phi = trial_phi;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
          if (move <= 1e-15 * (1.0 + z.norm())) return z;
        } else {
          lambda *= 4.0;
        }
      }
      if (!accepted) break;
    }
    return z;
  }

  /// Minimum-norm Newton steps onto P = 0. Returns false if it stalls.
  bool correct(Eigen::VectorXd& z) const {
    for (int it = 0; it < 40; ++it) {
      const Eigen::VectorXd p = values(z);
      if (p.cwiseAbs().maxCoeff() <= s.options_.constraint_tol) return true;
      const Eigen::MatrixXd g = gradients(z);
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(g);
      const Eigen::VectorXd step = cod.solve(p);
      if (!step.allFinite()) return false;
      z -= step;
      if (!z.allFinite()) return false;
    }
    return values(z).cwiseAbs().maxCoeff() <= s.options_.constraint_tol;
  }

  SigmaProjection project(const Eigen::VectorXd& x) const {
    const double norm = x.norm();
    SigmaProjection best{Eigen::VectorXd::Zero(x.size()), norm};  // 0 is always in Sigma
    if (norm == 0.0) return best;
    if (values(x).cwiseAbs().maxCoeff() <= s.options_.constraint_tol) return {x, 0.0};
    std::mt19937_64 rng(hash_point(x, s.options_.seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.25, 1.0);
    for (int start = 0; start < s.options_.starts; ++start) {
      Eigen::VectorXd z = x;
      if (start > 0) {
        Eigen::VectorXd dir(x.size());
        for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = gauss(rng);
        z += norm * unif(rng) * dir / std::max(dir.norm(), 1e-300);
      }
      for (int k = 0; k < s.options_.penalty_stages; ++k) z = penalty_minimize(x, z, std::pow(10.0, k));
      if (!correct(z)) continue;
      const double d = (x - z).norm();
      if (d < best.distance) best = {z, d};
    }
    if (!std::isfinite(best.distance)) throw ApproximationError("distance to the zero set did not converge", norm);
    return best;
  }
};

SigmaProjection nearest_point(const SigmaSet& sigma, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != sigma.ambient_dim())
    throw InputError("point has dimension " + std::to_string(x.size()) + ", Sigma lives in R^" +
                     std::to_string(sigma.ambient_dim()));
  switch (sigma.kind()) {
    case SigmaKind::Origin:
      return {Eigen::VectorXd::Zero(x.size()), x.norm()};
    case SigmaKind::LinearSubspace: {
      const Eigen::VectorXd normal_part = sigma.normal_basis().transpose() * x;
      return {x - sigma.normal_basis() * normal_part, normal_part.norm()};
    }
    case SigmaKind::PolynomialZeroSet:
      return ZeroSetProjector{sigma}.project(x);
  }
  return {x, 0.0};
}

double distance_to_sigma(const SigmaSet& sigma, const Eigen::VectorXd& x) { return nearest_point(sigma, x).distance; }

Eigen::VectorXd project_to_sigma(const SigmaSet& sigma, const Eigen::VectorXd& x) { return nearest_point(sigma, x).point; }

double constraint_residual(const SigmaSet& sigma, const Eigen::VectorXd& z) {
  if (sigma.kind() != SigmaKind::PolynomialZeroSet) return 0.0;
  return ZeroSetProjector{sigma}.values(z).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd normal_directions(const SigmaSet& sigma, const Eigen::VectorXd& z) {
  if (sigma.is_linear()) return sigma.normal_basis();
  const Eigen::MatrixXd g = ZeroSetProjector{sigma}.gradients(z);
  return orthonormalize(g.transpose(), 1e-12);
}

}  // namespace jetcheck

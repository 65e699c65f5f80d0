#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "jetcheck/polynomial.hpp"

namespace jetcheck {

enum class SigmaKind { Origin, LinearSubspace, PolynomialZeroSet };

std::string to_string(SigmaKind kind);

/// Tuning for the zero-set distance: multi-start penalty continuation with
/// weights 10^k, k = 0..penalty_stages-1, then a Newton correction onto the
/// constraints.
struct ProjectionOptions {
  int starts = 16;
  int penalty_stages = 7;
  int inner_iterations = 60;
  double constraint_tol = 1e-10;
  /// Relative slack the tests validate the approximation against.
  double relative_slack = 1e-6;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Closed germ Sigma at 0. Immutable after construction.
class SigmaSet {
 public:
  static SigmaSet origin(std::size_t n);

  /// Span of the columns of `spanning` (n x k, any spanning set). The stored
  /// basis is orthonormalized; Sigma = R^n is rejected.
  static SigmaSet linear_subspace(const Eigen::MatrixXd& spanning);

  /// Common zero set of the given polynomials. Every polynomial must vanish
  /// at 0 and at least one must be non-zero.
  static SigmaSet polynomial_zero_set(std::vector<RealPolynomial> polys, ProjectionOptions options = {});

  SigmaKind kind() const { return kind_; }
  std::size_t ambient_dim() const { return n_; }

  /// n x k orthonormal basis of Sigma (k = 0 for the origin).
  const Eigen::MatrixXd& basis() const { return basis_; }

  /// n x (n-k) orthonormal basis of the orthogonal complement. Chosen
  /// greedily from the coordinate axes, so axis-aligned subspaces get
  /// coordinate vectors. Empty for the polynomial kind.
  const Eigen::MatrixXd& normal_basis() const { return normal_; }

  const std::vector<RealPolynomial>& defining_polys() const { return polys_; }
  const ProjectionOptions& projection_options() const { return options_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// True for the kinds whose distance is exact.
  bool is_linear() const { return kind_ != SigmaKind::PolynomialZeroSet; }

  /// The image {Q s : s in Sigma} under an orthogonal Q.
  SigmaSet transformed(const Eigen::MatrixXd& q) const;

  std::string describe() const;

 private:
  SigmaSet() = default;
  void build_normal_basis();

  SigmaKind kind_ = SigmaKind::Origin;
  std::size_t n_ = 0;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd normal_;
  std::vector<RealPolynomial> polys_;
  std::vector<std::vector<RealPolynomial>> gradients_;
  ProjectionOptions options_;
  std::vector<std::string> warnings_;

  friend struct ZeroSetProjector;
};

struct SigmaProjection {
  Eigen::VectorXd point;
  double distance;
};

/// Nearest point of Sigma and the distance to it. Exact for the origin and
/// subspace kinds; an upper bound for the polynomial kind.
SigmaProjection nearest_point(const SigmaSet& sigma, const Eigen::VectorXd& x);

double distance_to_sigma(const SigmaSet& sigma, const Eigen::VectorXd& x);
Eigen::VectorXd project_to_sigma(const SigmaSet& sigma, const Eigen::VectorXd& x);

/// Max |P_i(z)| over the defining polynomials (0 for linear kinds).
double constraint_residual(const SigmaSet& sigma, const Eigen::VectorXd& z);

/// Unit normals at a point z of Sigma, as columns: the complement basis for
/// linear kinds, the orthonormalized non-vanishing gradients of the defining
/// polynomials otherwise (empty when all of them vanish at z).
Eigen::MatrixXd normal_directions(const SigmaSet& sigma, const Eigen::VectorXd& z);

}  // namespace jetcheck

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "jetcheck/linear_map.hpp"
#include "jetcheck/poly_map.hpp"

namespace jetcheck {

/// Largest C(n,p) the minor-based functionals will enumerate.
inline constexpr std::uint64_t kMaxMinorSubsets = 1'000'000;

/// Kuo distance: min over rows of the distance from row i to the span of
/// the other rows. For p = 1 this is the row norm.
double kuo_distance(const LinearMap& t);

/// Rabier's function: inf of |T* v| over unit v, i.e. the smallest of the
/// p singular values.
double rabier_nu(const LinearMap& t);

/// sqrt(sum of squared p x p minors / sum of squared (p-1) x (p-1) minors
/// with one row deleted). The (p-1) x (p-1) minor of an empty column set is
/// 1, so for p = 1 the denominator is 1. Returns 0 when the numerator is 0.
/// Throws CapabilityError when C(n,p) exceeds kMaxMinorSubsets.
double eta(const LinearMap& t);

/// max over column sets I of |M_I| / h_I, where h_I is the largest
/// (p-1)-minor with columns inside I and one row deleted; 0/0 = 0.
double eta_tilde(const LinearMap& t);

/// Gram determinant of the given vectors (columns of `vectors`), computed as
/// the squared volume from a Householder QR factorization. Empty set -> 1.
double gram_det(const Eigen::MatrixXd& vectors);

/// Sum over p-subsets of columns of the squared p x p minors of df(x).
double jacobian_minor_sum(const PolyMap& f, const Eigen::VectorXd& x);

/// Same sum for an arbitrary linear map.
double squared_minor_sum(const LinearMap& t);

/// |T* y| = |sum_i y_i row_i|. y must be a unit vector within 1e-12.
double dual_apply(const LinearMap& t, const Eigen::VectorXd& y);

/// Gram-determinant ratio sqrt(Gamma(rows) / sum_j Gamma(rows without j)),
/// with 0/0 = 0 and Gamma of the empty family equal to 1.
double gram_ratio(const LinearMap& t);

/// C(n,k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Lexicographic k-subsets of {0..n-1}.
std::vector<std::vector<int>> index_subsets(int n, int k);

}  // namespace jetcheck

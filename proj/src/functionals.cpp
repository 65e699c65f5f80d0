#include "jetcheck/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jetcheck {

namespace {

Eigen::MatrixXd select(const Eigen::MatrixXd& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
  return out;
}

double det(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 1.0;
  return m.determinant();
}

std::vector<int> all_but(int count, int skip) {
  std::vector<int> out;
  for (int i = 0; i < count; ++i)
    if (i != skip) out.push_back(i);
  return out;
}

std::vector<int> iota_vec(int count) { return all_but(count, -1); }

void check_subset_budget(const LinearMap& t) {
  const auto n = static_cast<std::uint64_t>(t.n());
  const auto p = static_cast<std::uint64_t>(t.p());
  const std::uint64_t c = binomial(n, p);
  if (c > kMaxMinorSubsets)
    throw CapabilityError("minor enumeration needs C(" + std::to_string(n) + "," + std::to_string(p) + ") = " +
                          std::to_string(c) + " subsets, above the limit of " + std::to_string(kMaxMinorSubsets) +
                          "; use kuo_distance or rabier_nu for large n");
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // c * num / i is exact at every step; guard the multiplication.
    if (c > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    c = c * num / i;
  }
  return c;
}

std::vector<std::vector<int>> index_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

double kuo_distance(const LinearMap& t) {
  const Eigen::MatrixXd& m = t.matrix();
  const Eigen::Index p = m.rows();
  if (p == 1) return m.row(0).norm();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p; ++i) {
    Eigen::MatrixXd others(m.cols(), p - 1);
    for (Eigen::Index j = 0, c = 0; j < p; ++j)
      if (j != i) others.col(c++) = m.row(j).transpose();
    // Residual of the orthogonal projection onto span(others): rotate by Q^T
    // and keep the components beyond the numerical rank.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
    const Eigen::VectorXd rotated = qr.householderQ().adjoint() * m.row(i).transpose();
    const Eigen::Index rank = qr.rank();
    best = std::min(best, rotated.tail(rotated.size() - rank).norm());
  }
  return best;
}

double rabier_nu(const LinearMap& t) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.matrix());
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

double eta(const LinearMap& t) {
  check_subset_budget(t);
  const Eigen::MatrixXd& m = t.matrix();
  const int p = static_cast<int>(t.p());
  const int n = static_cast<int>(t.n());
  const std::vector<int> rows = iota_vec(p);
  double numerator = 0.0;
  for (const auto& cols : index_subsets(n, p)) {
    const double d = det(select(m, rows, cols));
    numerator += d * d;
  }
  if (numerator == 0.0) return 0.0;
  double denominator = 0.0;
  if (p == 1) {
    denominator = 1.0;
  } else {
    for (const auto& cols : index_subsets(n, p - 1)) {
      for (int j = 0; j < p; ++j) {
        const double d = det(select(m, all_but(p, j), cols));
        denominator += d * d;
      }
    }
  }
  if (denominator == 0.0) return 0.0;
  return std::sqrt(numerator / denominator);
}

double eta_tilde(const LinearMap& t) {
  check_subset_budget(t);
  const Eigen::MatrixXd& m = t.matrix();
  const int p = static_cast<int>(t.p());
  const int n = static_cast<int>(t.n());
  const std::vector<int> rows = iota_vec(p);
  double best = 0.0;
  for (const auto& cols : index_subsets(n, p)) {
    const double minor = std::abs(det(select(m, rows, cols)));
    double h = 0.0;
    if (p == 1) {
      h = 1.0;
    } else {
      for (const auto& local : index_subsets(p, p - 1)) {
        std::vector<int> sub;
        for (int k : local) sub.push_back(cols[static_cast<std::size_t>(k)]);
        for (int j = 0; j < p; ++j) h = std::max(h, std::abs(det(select(m, all_but(p, j), sub))));
      }
    }
    if (minor == 0.0 || h == 0.0) continue;
    best = std::max(best, minor / h);
  }
  return best;
}

double gram_det(const Eigen::MatrixXd& vectors) {
  const Eigen::Index k = vectors.cols();
  if (k == 0) return 1.0;
  if (k > vectors.rows()) return 0.0;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(vectors);
  const Eigen::MatrixXd& r = qr.matrixQR();
  double vol = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) vol *= r(i, i);
  return vol * vol;
}

double squared_minor_sum(const LinearMap& t) {
  check_subset_budget(t);
  const Eigen::MatrixXd& m = t.matrix();
  const int p = static_cast<int>(t.p());
  const std::vector<int> rows = iota_vec(p);
  double sum = 0.0;
  for (const auto& cols : index_subsets(static_cast<int>(t.n()), p)) {
    const double d = det(select(m, rows, cols));
    sum += d * d;
  }
  return sum;
}

double jacobian_minor_sum(const PolyMap& f, const Eigen::VectorXd& x) { return squared_minor_sum(jacobian(f, x)); }

double dual_apply(const LinearMap& t, const Eigen::VectorXd& y) {
  if (y.size() != t.p())
    throw InputError("covector has dimension " + std::to_string(y.size()) + ", map has p=" + std::to_string(t.p()));
  if (std::abs(y.norm() - 1.0) > 1e-12) throw InputError("dual_apply needs a unit vector");
  return (t.matrix().transpose() * y).norm();
}

double gram_ratio(const LinearMap& t) {
  const Eigen::MatrixXd rows = t.matrix().transpose();  // n x p, columns are the gradients
  const Eigen::Index p = rows.cols();
  const double full = gram_det(rows);
  if (full == 0.0) return 0.0;
  double denominator = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    Eigen::MatrixXd rest(rows.rows(), p - 1);
    for (Eigen::Index i = 0, c = 0; i < p; ++i)
      if (i != j) rest.col(c++) = rows.col(i);
    denominator += gram_det(rest);
  }
  if (denominator == 0.0) return 0.0;
  return std::sqrt(full / denominator);
}

}  // namespace jetcheck

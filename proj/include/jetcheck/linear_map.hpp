#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>

#include "jetcheck/error.hpp"

namespace jetcheck {

/// A p x n real matrix with n >= p >= 1 and finite entries. Rows are the
/// gradients of the components when the map is a differential df(x).
class LinearMap {
 public:
  explicit LinearMap(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() < 1) throw InputError("linear map needs at least one row (p >= 1)");
    if (m_.rows() > m_.cols()) throw InputError("n >= p required for a linear map");
    if (!m_.allFinite()) throw InputError("linear map has non-finite entries");
  }

  static LinearMap from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const Eigen::Index p = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index n = p == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
    Eigen::MatrixXd m(p, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != n) throw InputError("ragged rows");
      Eigen::Index j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    return LinearMap(std::move(m));
  }

  Eigen::Index p() const { return m_.rows(); }
  Eigen::Index n() const { return m_.cols(); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::VectorXd row(Eigen::Index i) const { return m_.row(i).transpose(); }

  /// Largest singular value.
  double operator_norm() const;

 private:
  Eigen::MatrixXd m_;
};

}  // namespace jetcheck

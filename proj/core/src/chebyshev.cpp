#include "toric/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "toric/error.hpp"

namespace toric::cheb {

Axis::Axis(int n, double lo, double hi) : lo_(lo), hi_(hi) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "a Chebyshev axis needs at least two nodes");
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "Chebyshev axis needs lo < hi");
  nodes_.resize(n);
  weights_.resize(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  // Ascending order: theta runs from pi down to 0.
  for (int j = 0; j < n; ++j) {
    const double theta = (2.0 * (n - 1 - j) + 1.0) * std::numbers::pi / (2.0 * n);
    nodes_(j) = mid + half * std::cos(theta);
    weights_(j) = ((n - 1 - j) % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
  }
  d1_.setZero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d1_(i, j) = (weights_(j) / weights_(i)) / (nodes_(i) - nodes_(j));
      diag -= d1_(i, j);
    }
    d1_(i, i) = diag;
  }
  d2_ = d1_ * d1_;
}

Eigen::RowVectorXd Axis::basis(double x) const {
  const int n = size();
  Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (x == nodes_(j)) {
      r(j) = 1.0;
      return r;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    r(j) = weights_(j) / (x - nodes_(j));
    denom += r(j);
  }
  return r / denom;
}

}  // namespace toric::cheb

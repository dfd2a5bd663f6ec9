#pragma once

// Chebyshev-Gauss (first kind) nodes on [lo, hi] with barycentric interpolation
// and dense spectral differentiation. The nodes are interior, so nothing is ever
// sampled on the ends of the interval.

#include <Eigen/Core>

namespace toric::cheb {

class Axis {
 public:
  Axis() = default;
  Axis(int n, double lo, double hi);

  int size() const { return static_cast<int>(nodes_.size()); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// First and second derivative matrices acting on node values.
  const Eigen::MatrixXd& D1() const { return d1_; }
  const Eigen::MatrixXd& D2() const { return d2_; }

  /// Row r with r·f = p(x), p the interpolant of the node values f. Valid for any x.
  Eigen::RowVectorXd basis(double x) const;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd d1_;
  Eigen::MatrixXd d2_;
};

}  // namespace toric::cheb

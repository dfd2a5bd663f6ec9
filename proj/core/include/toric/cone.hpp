#pragma once

#include <vector>

#include <Eigen/Core>

#include "toric/lattice.hpp"

namespace toric {

/// Polyhedral cone in R^n (n <= 3 in practice), held in both half-space and
/// generator form. One form is authoritative (the one it was built from); the
/// other is derived exactly by double description.
class Cone {
 public:
  enum class Form { Halfspace, Generator };

  /// {w : <h, w> >= 0 for every h in normals}.
  static Cone from_halfspaces(int dim, std::vector<IntVector> normals);
  /// cone(rays) + span(lines).
  static Cone from_generators(int dim, std::vector<IntVector> rays, std::vector<IntVector> lines = {});

  int dim() const { return dim_; }
  Form authoritative() const { return form_; }

  /// Inequalities <h, w> >= 0 describing the cone. Equalities show up as +h, -h pairs.
  const std::vector<IntVector>& halfspaces() const { return halfspaces_; }
  /// Extreme rays as primitive lattice vectors (pointed part, orthogonal to lines()).
  const std::vector<IntVector>& rays() const { return rays_; }
  /// Lattice basis of the lineality space.
  const std::vector<IntVector>& lines() const { return lines_; }

  bool is_pointed() const { return lines_.empty(); }
  bool is_zero() const { return rays_.empty() && lines_.empty(); }
  /// Dimension of the linear span.
  int span_dim() const;
  bool has_interior() const { return span_dim() == dim_; }

  bool contains(const Eigen::VectorXd& w, double tol = 1e-12) const;
  /// Strict interior membership: every inequality holds with margin > tol·|h||w|.
  bool interior_contains(const Eigen::VectorXd& w, double tol = 1e-12) const;

 private:
  int dim_ = 0;
  Form form_ = Form::Halfspace;
  std::vector<IntVector> halfspaces_;
  std::vector<IntVector> rays_;
  std::vector<IntVector> lines_;
};

/// C' = {v : <v, w> >= 0 for all w in C}, returned in generator form.
Cone dual_cone(const Cone& c);

}  // namespace toric

#pragma once

// Labeled polyhedra P = ∩ {x : <x, m_i n_i> + a_i >= 0} with primitive integer
// normals n_i, positive integer labels m_i and rational offsets a_i, together
// with their vertex/cone structure and the toric data read off from them.
//
// Everything combinatorial is decided in exact rational arithmetic; the double
// accessors exist for the numerical modules.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "toric/cone.hpp"
#include "toric/exact.hpp"
#include "toric/lattice.hpp"

namespace toric {

struct Facet {
  IntVector normal;          // primitive n_i
  std::int64_t label = 1;    // m_i >= 1
  exact::Rational offset;    // a_i
  bool exact_offset = true;  // false when the offset came from a floating-point literal

  /// m_i n_i
  IntVector scaled_normal() const;
  double offset_value() const { return exact::to_double(offset); }

  /// Builds a facet from an arbitrary nonzero integer vector v: the stored normal
  /// is primitive_reduce(v) and the label absorbs the multiplier, so the
  /// inequality <x, label·v> + offset >= 0 is preserved.
  static Facet from_raw(const IntVector& v, std::int64_t label, exact::Rational offset, bool exact_offset = true);
};

/// Exact generator description: P = conv(points) + cone(rays) + span(lines).
/// For pointed P the points are exactly the vertices.
struct PolyhedronGenerators {
  std::vector<exact::RatVector> points;
  std::vector<exact::RatVector> rays;
  std::vector<exact::RatVector> lines;
};

class LabeledPolyhedron {
 public:
  /// Throws UnsupportedDimension (dim outside 1..3), EmptyPolyhedron, EmptyInterior,
  /// RedundantFacet. Labels must be >= 1 and normals primitive.
  LabeledPolyhedron(int dim, std::vector<Facet> facets);

  int dim() const { return dim_; }
  std::size_t num_facets() const { return facets_.size(); }
  const std::vector<Facet>& facets() const { return facets_; }
  const Facet& facet(std::size_t i) const { return facets_.at(i); }

  /// Rows m_i n_i.
  const Eigen::MatrixXd& A() const { return A_; }
  /// Offsets a_i.
  const Eigen::VectorXd& a() const { return a_; }

  /// L_i(x) = <m_i n_i, x> + a_i.
  Eigen::VectorXd slacks(const Eigen::VectorXd& x) const { return A_ * x + a_; }
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
  bool interior_contains(const Eigen::VectorXd& x) const;

  /// Every a_i equals 2 (shrinker normalisation).
  bool shrinker_normalized() const;

  const PolyhedronGenerators& generators() const { return gens_; }

  /// A point with every generator weight positive, hence in int(P).
  Eigen::VectorXd interior_point() const;

  /// P + c.
  LabeledPolyhedron translated(const Eigen::VectorXd& c) const;

 private:
  int dim_;
  std::vector<Facet> facets_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd a_;
  PolyhedronGenerators gens_;
};

/// P1 x P2 in R^{n1+n2}.
LabeledPolyhedron product(const LabeledPolyhedron& p1, const LabeledPolyhedron& p2);

/// Splits P as P1 x P2 with dim(P1) = first_dim, or nullopt when the facets do
/// not separate along the coordinate split.
std::optional<std::pair<LabeledPolyhedron, LabeledPolyhedron>> split_product(const LabeledPolyhedron& p,
                                                                             int first_dim);

struct VertexData {
  Eigen::VectorXd point;
  exact::RatVector exact_point;
  std::vector<int> active_facets;
  std::vector<IntVector> edge_generators;  // primitive lattice directions of the edges
};

struct ValidationReport {
  bool proper = false;
  bool rational = false;
  bool simple = false;

  std::optional<IntVector> line_witness;        // a line contained in C(P) when improper
  std::optional<IntVector> irrational_witness;  // non-lattice edge generator
  std::optional<std::size_t> nonsimple_vertex;  // index into `vertices`
  std::string nonsimple_reason;

  std::vector<VertexData> vertices;

  bool labeled() const { return proper && rational && simple; }
};

ValidationReport validate(const LabeledPolyhedron& p);

/// Throws NotProper / NotSimple unless P is a labeled (proper, rational, simple) polyhedron.
void require_labeled(const LabeledPolyhedron& p);

/// Vertices by exhaustive n-subset solves. Throws NotSimple for non-simple P.
std::vector<VertexData> vertices(const LabeledPolyhedron& p);

/// C(P) = ∩ {w : <n_i, w> >= 0}, half-space form.
Cone asymptotic_cone(const LabeledPolyhedron& p);

struct MinkowskiDecomposition {
  std::vector<Eigen::VectorXd> vertices;
  Cone recession;

  /// Writes x = Σ λ_i v_i + Σ μ_j r_j with λ >= 0, Σλ = 1, μ >= 0 over the extreme
  /// rays r_j, via nonnegative least squares. Returns the reconstruction error.
  struct PointSplit {
    Eigen::VectorXd hull_point;
    Eigen::VectorXd cone_point;
    Eigen::VectorXd lambda;
    Eigen::VectorXd mu;
    double error = 0.0;
  };
  PointSplit split(const Eigen::VectorXd& x) const;
};

/// P = conv(vertices) + C(P). Throws NotProper for improper P.
MinkowskiDecomposition minkowski_decompose(const LabeledPolyhedron& p);

/// Structure group ι/ι' of the face cut out by `face`: ι is the saturated lattice
/// of span{n_i}, ι' is generated by {m_i n_i}. Throws EmptyFace.
lattice::AbelianGroup structure_group(const LabeledPolyhedron& p, const std::vector<int>& face);

struct DelzantData {
  IntMatrix projection;  // N x n, row i is m_i n_i, i.e. the transpose of ϖ
  IntMatrix kernel;      // N x (N - n), columns a Z-basis of ker ϖ
  Eigen::VectorXd offsets;
};

/// Throws DegenerateProjection when rank ϖ < n.
DelzantData delzant_data(const LabeledPolyhedron& p);

struct FanCone {
  std::vector<int> face;  // facets containing the face; empty for P itself
  Cone cone;              // generated by the primitive normals n_i, i in face
};

/// One cone per nonempty face of a labeled polyhedron.
std::vector<FanCone> normal_fan(const LabeledPolyhedron& p);

}  // namespace toric

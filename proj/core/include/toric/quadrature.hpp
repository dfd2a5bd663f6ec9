#pragma once

// Integration of e^{-<b,x>} (times monomials of degree <= 2) over possibly
// unbounded polyhedra. Simplices are integrated in closed form through divided
// differences of exp; unbounded regions are truncated at <b,x> <= T with a
// certified bound on what was cut off.

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "toric/polyhedra.hpp"

namespace toric::quad {

struct Simplex {
  /// n+1 vertices. Plans put the fan apex first and the boundary base after it.
  std::vector<Eigen::VectorXd> vertices;
  /// |det(v_1 - v_0, ..., v_n - v_0)| / n!
  double volume = 0.0;

  static Simplex make(std::vector<Eigen::VectorXd> vertices);
  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Divided difference exp[s_0, ..., s_m]; repeated nodes are allowed.
double exp_divided_difference(std::span<const double> nodes);

/// ∫_S e^{-<b,x>} dx. Degenerate simplices integrate to 0.
double exp_integral_simplex(const Simplex& s, const Eigen::VectorXd& b);

/// ∫_S x^α e^{-<b,x>} dx for a multi-index α with |α| <= 2 (UnsupportedMoment otherwise).
double moment_integral_simplex(const Simplex& s, const Eigen::VectorXd& b, std::span<const int> alpha);

/// All moments of order <= 2 of one simplex at once.
struct Moments {
  double mass = 0.0;
  Eigen::VectorXd first;
  Eigen::MatrixXd second;
};
Moments simplex_moments(const Simplex& s, const Eigen::VectorXd& b);

struct QuadraturePlan {
  int dim = 0;
  Eigen::VectorXd weight;  // b
  std::vector<Simplex> simplices;
  double truncation = std::numeric_limits<double>::infinity();  // T; infinite when P is bounded
  double tail_bound = 0.0;  // certified for |x|^k e^{-<b,x>}, k <= 2, beyond T
  double epsilon = 0.0;     // <b,w> >= epsilon |w| on C(P)
  double support_constant = 0.0;  // <b,x> >= epsilon |x| - C on P
  bool bounded = true;

  /// Kahan-summed integrals over the plan in fixed simplex order.
  double integrate_exp() const;
  Moments integrate_moments() const;
};

/// Direction w in C(P) with <b,w> <= 0, or nullopt when b ∈ int(C'(P)).
std::optional<Eigen::VectorXd> divergence_witness(const LabeledPolyhedron& p, const Eigen::VectorXd& b);

/// Throws DivergentWeight (witness attached) when b ∉ int(C'(P)).
QuadraturePlan plan(const LabeledPolyhedron& p, const Eigen::VectorXd& b, double tol);

/// Layer-cake bound on ∫_{P ∩ {<b,x> > T}} |x|^k e^{-<b,x>} dx.
double tail_estimate(int dim, double b_norm, double epsilon, double support_constant, double truncation, int k);

/// Vertices of {x : A x + a >= 0} by n-subset solves in floating point (n <= 3).
std::vector<Eigen::VectorXd> polytope_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& a);

/// Triangulates the bounded polytope {x : A x + a >= 0}: fan from the vertex
/// centroid in 2D, facet fans coned to the centroid in 3D.
std::vector<Simplex> triangulate(const Eigen::MatrixXd& A, const Eigen::VectorXd& a);

/// Fixed-node integration of an arbitrary integrand over the plan's region
/// (tanh-sinh product rules on apex/base coordinates, so integrable endpoint
/// singularities on the boundary of P are handled). `level` sets the step 2^-level.
double integrate(const QuadraturePlan& plan, const std::function<double(const Eigen::VectorXd&)>& f, int level = 4);

/// Same rule, several integrands sharing the evaluation points.
Eigen::VectorXd integrate_many(const QuadraturePlan& plan,
                               const std::function<void(const Eigen::VectorXd&, Eigen::Ref<Eigen::VectorXd>)>& f,
                               int count, int level = 4);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace toric::quad

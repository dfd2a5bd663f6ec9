#pragma once

// Symplectic potentials on int(P): the canonical potential u_P, closed-form
// corrections, and grid-interpolated corrections produced by the solver, with
// Legendre duality and metric data.

#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "toric/chebyshev.hpp"
#include "toric/polyhedra.hpp"

namespace toric {

/// Value, gradient and Hessian at a point.
struct Jet {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  static Jet zero(int n) { return {0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)}; }
  Jet& operator+=(const Jet& o);
  Jet& operator*=(double k);
};

/// u_P = ½ Σ L_i log L_i with L_i(x) = <m_i n_i, x> + a_i. OutOfDomain unless x ∈ int(P).
Jet guillemin_jet(const LabeledPolyhedron& p, const Eigen::VectorXd& x);
/// Third derivatives of u_P: entry k is the matrix ∂_k Hess u_P.
std::vector<Eigen::MatrixXd> guillemin_third(const LabeledPolyhedron& p, const Eigen::VectorXd& x);
/// φ_P = ½ Σ (l_i(x) - a_i log L_i(x)), the Legendre dual of u_P written in x.
double kahler_potential_canonical(const LabeledPolyhedron& p, const Eigen::VectorXd& x);

struct PotentialTerm {
  enum class Kind { Affine, Quadratic, Bump, FacetLog };
  Kind kind = Kind::Affine;
  double scalar = 0.0;     // affine constant, bump amplitude or facet-log coefficient
  Eigen::VectorXd vector;  // affine slope, quadratic or bump centre
  Eigen::MatrixXd matrix;  // quadratic form Q in ½ (x - c)ᵀ Q (x - c)
  Eigen::VectorXd radius;  // bump half-widths
  int facet = 0;

  static PotentialTerm affine(double constant, Eigen::VectorXd slope);
  static PotentialTerm quadratic(Eigen::MatrixXd q, Eigen::VectorXd centre);
  /// amplitude · Π_k (1 - t_k²)^5 with t_k = (x_k - c_k)/r_k, zero outside the box.
  static PotentialTerm bump(double amplitude, Eigen::VectorXd centre, Eigen::VectorXd radius);
  /// coefficient · L_i log L_i.
  static PotentialTerm facet_log(int facet, double coefficient);

  Jet jet(const LabeledPolyhedron& p, const Eigen::VectorXd& x) const;
  PotentialTerm scaled(double k) const;
};

/// Smooth correction s stored at tensor Chebyshev nodes of a box. Along flagged
/// axes s continues affinely past the bottom / top of the box.
class GridCorrection {
 public:
  GridCorrection(std::vector<cheb::Axis> axes, Eigen::VectorXd values, std::vector<bool> extrapolate_low,
                 std::vector<bool> extrapolate_high);

  int dim() const { return static_cast<int>(axes_.size()); }
  const std::vector<cheb::Axis>& axes() const { return axes_; }
  /// Node values, first axis slowest.
  const Eigen::VectorXd& values() const { return values_; }
  const std::vector<bool>& extrapolate_low() const { return extrapolate_low_; }
  const std::vector<bool>& extrapolate_high() const { return extrapolate_high_; }
  int order() const;

  Jet jet(const Eigen::VectorXd& x) const;

  // Solver metadata, carried through serialisation.
  Eigen::VectorXd anchor;
  Eigen::VectorXd weight;  // b used in the solve
  double constant = 0.0;   // residual constant c
  double truncation = std::numeric_limits<double>::infinity();

 private:
  std::vector<cheb::Axis> axes_;
  Eigen::VectorXd values_;
  std::vector<bool> extrapolate_low_;
  std::vector<bool> extrapolate_high_;
  // Derivative tables on the nodes: [0] = s, [1 + k] = ∂_k s, then ∂_jk s for j <= k.
  std::vector<Eigen::VectorXd> tables_;
  double eval_table(std::size_t t, const std::vector<Eigen::RowVectorXd>& rows) const;
};

class SymplecticPotential {
 public:
  enum class Form { Canonical, ClosedForm, GridCorrection };

  /// canonical_weight multiplies u_P (1 for u_P + corrections, 0 for a bare closed form).
  SymplecticPotential(std::shared_ptr<const LabeledPolyhedron> base, double canonical_weight,
                      std::vector<PotentialTerm> terms = {},
                      std::vector<std::pair<double, std::shared_ptr<const GridCorrection>>> grids = {});

  const LabeledPolyhedron& base() const { return *base_; }
  std::shared_ptr<const LabeledPolyhedron> base_ptr() const { return base_; }
  double canonical_weight() const { return canonical_; }
  const std::vector<PotentialTerm>& terms() const { return terms_; }
  const std::vector<std::pair<double, std::shared_ptr<const GridCorrection>>>& grids() const { return grids_; }
  Form form() const;
  int dim() const { return base_->dim(); }

  /// OutOfDomain unless x ∈ int(P).
  Jet jet(const Eigen::VectorXd& x) const;
  double value(const Eigen::VectorXd& x) const { return jet(x).value; }
  /// u - u_P, without forming u_P when it enters with weight 1.
  Jet correction_jet(const Eigen::VectorXd& x) const;

  SymplecticPotential plus(const PotentialTerm& t) const;
  SymplecticPotential scaled(double k) const;
  /// Sum of two potentials on the same polyhedron.
  SymplecticPotential operator+(const SymplecticPotential& o) const;

 private:
  std::shared_ptr<const LabeledPolyhedron> base_;
  double canonical_;
  std::vector<PotentialTerm> terms_;
  std::vector<std::pair<double, std::shared_ptr<const GridCorrection>>> grids_;
};

SymplecticPotential guillemin_potential(const LabeledPolyhedron& p);
SymplecticPotential guillemin_potential(std::shared_ptr<const LabeledPolyhedron> p);

/// v_t = (1 - t) v0 + t v1.
SymplecticPotential geodesic_point(const SymplecticPotential& v0, const SymplecticPotential& v1, double t);

struct LegendrePair {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double phi = 0.0;
};

/// y = ∇u(x), φ(y) = <y, x> - u(x). NotConvexHere when Hess u(x) is not PD.
LegendrePair legendre(const SymplecticPotential& u, const Eigen::VectorXd& x);
/// Solves ∇u(x) = y by damped Newton inside int(P). NoConvergence on failure.
Eigen::VectorXd inverse_legendre(const SymplecticPotential& u, const Eigen::VectorXd& y, double tol = 1e-12);

struct MetricData {
  Eigen::VectorXd x;
  Eigen::MatrixXd G;
  Eigen::MatrixXd H;
};
MetricData metric(const SymplecticPotential& u, const Eigen::VectorXd& x);

/// True when the symmetric matrix is positive definite (Cholesky succeeds).
bool positive_definite(const Eigen::MatrixXd& m);

/// A point in the relative interior of facet i.
Eigen::VectorXd facet_point(const LabeledPolyhedron& p, std::size_t facet);

/// Interior sample points: random convex combinations of vertices plus random
/// nonnegative ray combinations (coefficients up to ray_scale), pulled 10% toward
/// the interior point.
std::vector<Eigen::VectorXd> sample_interior(const LabeledPolyhedron& p, int count, std::uint64_t seed,
                                             double ray_scale = 4.0);

}  // namespace toric

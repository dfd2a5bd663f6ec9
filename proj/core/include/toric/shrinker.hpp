#pragma once

// Soliton vector, the soliton Monge-Ampère residual
//   <∇u, x> - u - log det Hess u - <b, x> = c
// and a spectral Newton solver for it in dimensions 1 and 2.

#include <string>

#include <Eigen/Core>

#include "toric/potentials.hpp"

namespace toric {

/// Default absolute tail tolerance for the weighted-volume plans.
inline constexpr double kVolumeTailTol = 1e-14;

/// F(b) = ∫_P e^{-<b,x>}. DivergentWeight outside int(C'(P)).
double weighted_volume(const LabeledPolyhedron& p, const Eigen::VectorXd& b, double tail_tol = kVolumeTailTol);

struct VolumeDerivatives {
  double value = 0.0;
  Eigen::VectorXd gradient;  // -∫ x e^{-<b,x>}
  Eigen::MatrixXd hessian;   //  ∫ x xᵀ e^{-<b,x>}
};
VolumeDerivatives grad_hess_F(const LabeledPolyhedron& p, const Eigen::VectorXd& b, double tail_tol = kVolumeTailTol);

struct SolitonVector {
  Eigen::VectorXd b;
  double gradient_norm = 0.0;
  double F_value = 0.0;
  int iterations = 0;
};

/// Damped Newton on log F from the mean of the normalised extreme rays of C'(P)
/// (0 for bounded P). Stops when |∇F(b)| <= tol; NoConvergence after 200 steps.
SolitonVector find_soliton_vector(const LabeledPolyhedron& p, double tol = 1e-12);

/// <∇u, x> - u - log det Hess u - <b, x>. NotConvexHere when Hess u is not PD.
double residual(const SymplecticPotential& u, const Eigen::VectorXd& b, const Eigen::VectorXd& x);

struct GridSpec {
  int nodes = 32;            // Chebyshev nodes per axis
  double truncation = 12.0;  // b_k x_k <= T on unbounded axes
  int max_iterations = 60;
};

struct SolveResult {
  SymplecticPotential potential;
  double residual_constant = 0.0;
  double residual_deviation = 0.0;  // max over nodes of |R - c|
  int iterations = 0;
  Eigen::VectorXd anchor;
  double truncation = 0.0;
  std::vector<double> deviation_history;  // one entry per accepted step, starting with s = 0
  std::string boundary_condition;         // what was imposed on truncated sides
};

/// Newton-Gauss iteration for s = u - u_P on a tensor Chebyshev grid over P (or its
/// truncation). Dimension 1, or dimension 2 with every facet normal a coordinate
/// axis (UnsupportedDomain otherwise).
SolveResult solve(const LabeledPolyhedron& p, const SolitonVector& b, const GridSpec& grid = {}, double tol = 1e-9);
SolveResult solve(std::shared_ptr<const LabeledPolyhedron> p, const SolitonVector& b, const GridSpec& grid = {},
                  double tol = 1e-9);

/// Residual deviation (max - min)/2 of u1 ⊕ u2 over interior samples of P = P1 x P2
/// with weight (b1, b2). NotAProduct when P does not split.
double product_check(const LabeledPolyhedron& p, const SymplecticPotential& u1, const Eigen::VectorXd& b1,
                     const SymplecticPotential& u2, const Eigen::VectorXd& b2, std::uint64_t seed = 0);

}  // namespace toric

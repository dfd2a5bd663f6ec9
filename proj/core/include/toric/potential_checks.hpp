#pragma once

// Numerical verdicts on the boundary behaviour of a potential and on membership
// in the space of admissible potentials. Nothing here throws on a failed check;
// the reports say what failed and where.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "toric/potentials.hpp"

namespace toric {

struct LadderSample {
  double distance = 0.0;  // L_i at the sample
  Eigen::VectorXd x;
  Jet correction;            // s = u - u_P
  double det_product = 0.0;  // det(Hess u) Π_j L_j
};

struct FacetCheck {
  std::size_t facet = 0;
  std::vector<LadderSample> ladder;
  bool correction_bounded = false;
  bool det_product_positive = false;
  double det_limit = 0.0;  // Richardson-extrapolated limit of det_product
  std::string reason;
};

struct BoundaryReport {
  bool correction_smooth = false;  // (i) u - u_P and two derivatives stay bounded toward every facet
  bool det_positive = false;       // (ii) det(Hess u) Π L_j has a positive finite limit at every facet
  std::vector<FacetCheck> facets;
  bool passed() const { return correction_smooth && det_positive; }
  std::string summary() const;
};

/// Samples approach each facet along x_k = p + δ_k (c - p) with L_i(x_k) = 10^-k, k = 1..6.
BoundaryReport check_boundary_conditions(const SymplecticPotential& u, const LabeledPolyhedron& p);

struct EReport {
  bool convex = false;
  bool correction_smooth = false;
  bool gradient_surjective = false;
  bool integrable = false;
  /// Surjectivity is probed along facet ladders and recession rays only.
  bool surjectivity_is_directional = true;
  double weighted_l1 = 0.0;  // ∫_P |u| e^{-<b,x>} when integrable
  std::vector<std::string> reasons;
  BoundaryReport boundary;

  bool passed() const { return convex && correction_smooth && gradient_surjective && integrable; }
  std::string summary() const;
};

EReport check_space_E(const SymplecticPotential& u, const LabeledPolyhedron& p, const Eigen::VectorXd& b,
                      std::uint64_t seed = 0);

/// The ladder point at L_i = distance on the segment from the interior point to facet i.
Eigen::VectorXd ladder_point(const LabeledPolyhedron& p, std::size_t facet, double distance);

/// Decides whether a sequence sampled on a geometric ladder settles down: late
/// increments must be at most half the early ones, up to an absolute floor.
bool settles(const std::vector<double>& q, double floor_rel = 1e-6);

}  // namespace toric

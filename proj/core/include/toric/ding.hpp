#pragma once

// Ding functional along linear paths of symplectic potentials:
//   D(v) = (1/F(b)) ∫_P v e^{-<b,x>} dx - log D1(v),  D1(v) = ∫ e^{-φ(y)} dy,
// with D1 evaluated on P through y = ∇v(x).

#include <string>
#include <vector>

#include <Eigen/Core>

#include "toric/potentials.hpp"

namespace toric {

struct DingOptions {
  int level = 0;            // tanh-sinh level of the x-space rule; 0 picks 8, 6, 4 in dimensions 1, 2, 3
  double tail_tol = 1e-12;  // certified tail of the weight e^{-<b,x>}

  int level_for(int dim) const { return level > 0 ? level : dim == 1 ? 8 : dim == 2 ? 6 : 4; }
};

struct DingValue {
  double t = 0.0;
  double D1 = 0.0;
  double D = 0.0;
};

/// ∫_P e^{v - <∇v,x>} det Hess v dx. The weight b only fixes the truncation of
/// unbounded P; DivergentD1 when the tail beyond it cannot be certified.
double d1(const SymplecticPotential& v, const LabeledPolyhedron& p, const Eigen::VectorXd& b,
          const DingOptions& opt = {});
/// Same, with b the soliton vector of P.
double d1(const SymplecticPotential& v, const LabeledPolyhedron& p, const DingOptions& opt = {});

/// NotInE when ∫ |v| e^{-<b,x>} is not finite, DivergentD1 as above.
DingValue ding(const SymplecticPotential& v, const LabeledPolyhedron& p, const Eigen::VectorXd& b,
               const DingOptions& opt = {});

/// D along v_t = (1 - t) v0 + t v1 at num_t equally spaced t in [0, 1].
std::vector<DingValue> convexity_scan(const SymplecticPotential& v0, const SymplecticPotential& v1,
                                      const LabeledPolyhedron& p, const Eigen::VectorXd& b, int num_t,
                                      const DingOptions& opt = {});

struct ScanAnalysis {
  double min_second_difference = 0.0;
  double spread = 0.0;               // max D - min D
  double affine_fit_residual = 0.0;  // max |v1 - v0 - L| over interior samples, L the least-squares affine fit
  Eigen::VectorXd affine_slope;
  bool convex(double tol = 1e-6) const { return min_second_difference >= -tol; }
  bool flat(double tol = 1e-6) const { return spread <= tol; }
  bool endpoints_affine(double tol = 1e-6) const { return affine_fit_residual <= tol; }
};

ScanAnalysis analyze_scan(const std::vector<DingValue>& scan, const SymplecticPotential& v0,
                          const SymplecticPotential& v1, const LabeledPolyhedron& p, std::uint64_t seed = 0);

/// "t,D1,D" header and one row per value.
std::string ding_csv(const std::vector<DingValue>& scan);

}  // namespace toric

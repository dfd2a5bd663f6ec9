#include "toric/shrinker.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "toric/error.hpp"
#include "toric/quadrature.hpp"

namespace toric {

double weighted_volume(const LabeledPolyhedron& p, const Eigen::VectorXd& b, double tail_tol) {
  return quad::plan(p, b, tail_tol).integrate_exp();
}

VolumeDerivatives grad_hess_F(const LabeledPolyhedron& p, const Eigen::VectorXd& b, double tail_tol) {
  const quad::Moments m = quad::plan(p, b, tail_tol).integrate_moments();
  return {m.mass, -m.first, m.second};
}

namespace {

Eigen::VectorXd starting_weight(const LabeledPolyhedron& p) {
  const Cone dual = dual_cone(asymptotic_cone(p));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p.dim());
  // Lines of C' are orthogonal to its rays, so the rays alone give an interior point.
  if (dual.rays().empty()) return b;
  for (const auto& r : dual.rays()) b += r.cast<double>().normalized();
  return b / static_cast<double>(dual.rays().size());
}

}  // namespace

SolitonVector find_soliton_vector(const LabeledPolyhedron& p, double tol) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  require_labeled(p);
  Eigen::VectorXd b = starting_weight(p);
  std::ostringstream trace;
  VolumeDerivatives d = grad_hess_F(p, b);
  for (int it = 0; it < 200; ++it) {
    const double gnorm = d.gradient.norm();
    trace << "iter " << it << " b = (" << b.transpose() << ") F = " << d.value << " |grad F| = " << gnorm << "\n";
    if (gnorm <= tol) return {b, gnorm, d.value, it};

    // Newton on log F: gradient -mean, Hessian the covariance.
    const Eigen::VectorXd mean = -d.gradient / d.value;
    const Eigen::MatrixXd cov = d.hessian / d.value - mean * mean.transpose();
    const Eigen::VectorXd g = -mean;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    const Eigen::VectorXd step = -ldlt.solve(g);
    const double f0 = std::log(d.value);
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, alpha *= 0.5) {
      const Eigen::VectorXd trial = b + alpha * step;
      if (quad::divergence_witness(p, trial)) continue;
      VolumeDerivatives dt;
      try {
        dt = grad_hess_F(p, trial);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::DivergentWeight) continue;
        throw;
      }
      if (std::log(dt.value) <= f0 + 1e-4 * alpha * g.dot(step) || dt.gradient.norm() < gnorm) {
        b = trial;
        d = std::move(dt);
        accepted = true;
        break;
      }
    }
    if (!accepted || (alpha * step).norm() <= 1e-15 * (1.0 + b.norm())) {
      // Newton has stalled at rounding level; report what was reached.
      if (d.gradient.norm() <= 1e3 * tol) return {b, d.gradient.norm(), d.value, it + 1};
      throw Error(ErrorCode::NoConvergence, "soliton vector search stalled").with_trace(trace.str());
    }
  }
  throw Error(ErrorCode::NoConvergence, "soliton vector search hit the iteration cap").with_trace(trace.str());
}

double residual(const SymplecticPotential& u, const Eigen::VectorXd& b, const Eigen::VectorXd& x) {
  const Jet j = u.jet(x);
  Eigen::LLT<Eigen::MatrixXd> llt(j.hess);
  if (llt.info() != Eigen::Success || !positive_definite(j.hess))
    throw Error(ErrorCode::NotConvexHere, "Hess u is not positive definite");
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return j.grad.dot(x) - j.value - logdet - b.dot(x);
}

double product_check(const LabeledPolyhedron& p, const SymplecticPotential& u1, const Eigen::VectorXd& b1,
                     const SymplecticPotential& u2, const Eigen::VectorXd& b2, std::uint64_t seed) {
  const int n1 = u1.dim();
  const auto parts = split_product(p, n1);
  if (!parts || u2.dim() != p.dim() - n1) throw Error(ErrorCode::NotAProduct, "polyhedron does not split as P1 x P2");
  const auto s1 = sample_interior(u1.base(), 16, seed);
  const auto s2 = sample_interior(u2.base(), 16, seed + 1);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& x1 : s1) {
    const double r1 = residual(u1, b1, x1);
    for (const auto& x2 : s2) {
      const double r = r1 + residual(u2, b2, x2);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return 0.5 * (hi - lo);
}

}  // namespace toric

#include "toric/ding.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>

#include "toric/error.hpp"
#include "toric/quadrature.hpp"
#include "toric/shrinker.hpp"

namespace toric {

namespace {

// log of the D1 integrand, -ψ(x) + log det Hess v with ψ = <∇v,x> - v.
double log_density(const SymplecticPotential& v, const Eigen::VectorXd& x) {
  const Jet j = v.jet(x);
  Eigen::LLT<Eigen::MatrixXd> llt(j.hess);
  if (llt.info() != Eigen::Success || !positive_definite(j.hess))
    throw Error(ErrorCode::NotConvexHere, "Hess v is not positive definite");
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return j.value - j.grad.dot(x) + logdet;
}

// e^{-ψ} det must decay along every recession ray and be negligible where the
// plan cuts P off.
void certify_d1_tail(const SymplecticPotential& v, const LabeledPolyhedron& p, const quad::QuadraturePlan& pl,
                     double total) {
  if (pl.bounded) return;
  const Eigen::VectorXd c = p.interior_point();
  const Cone rec = asymptotic_cone(p);
  for (const auto& r : rec.rays()) {
    const Eigen::VectorXd w = r.cast<double>().normalized();
    // Point where the ray from c crosses <b,x> = T.
    const double t_cut = (pl.truncation - pl.weight.dot(c)) / pl.weight.dot(w);
    const double prev = log_density(v, c + 0.5 * t_cut * w);
    const double at_cut = log_density(v, c + t_cut * w);
    const double beyond = log_density(v, c + 2.0 * t_cut * w);
    const double far = log_density(v, c + 4.0 * t_cut * w);
    const bool decays = at_cut < prev && beyond < at_cut && (beyond - far) >= 0.5 * (at_cut - beyond);
    if (!decays || !(std::exp(at_cut) * std::pow(t_cut, p.dim()) <= 1e-8 * total)) {
      std::ostringstream os;
      os << "D1 integrand does not decay along recession ray (" << w.transpose() << ")";
      throw Error(ErrorCode::DivergentD1, os.str());
    }
  }
}

quad::QuadraturePlan plan_or_not_in_E(const LabeledPolyhedron& p, const Eigen::VectorXd& b, double tol) {
  try {
    return quad::plan(p, b, tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DivergentWeight)
      throw Error(ErrorCode::NotInE, std::string("v e^{-<b,x>} is not integrable: ") + e.what(), e.witness());
    throw;
  }
}

}  // namespace

double d1(const SymplecticPotential& v, const LabeledPolyhedron& p, const Eigen::VectorXd& b, const DingOptions& opt) {
  const quad::QuadraturePlan pl = plan_or_not_in_E(p, b, opt.tail_tol);
  const double total = quad::integrate(
      pl, [&](const Eigen::VectorXd& x) { return std::exp(log_density(v, x)); }, opt.level_for(p.dim()));
  if (!(total > 0) || !std::isfinite(total)) throw Error(ErrorCode::DivergentD1, "D1 is not a positive finite number");
  certify_d1_tail(v, p, pl, total);
  return total;
}

double d1(const SymplecticPotential& v, const LabeledPolyhedron& p, const DingOptions& opt) {
  return d1(v, p, find_soliton_vector(p).b, opt);
}

DingValue ding(const SymplecticPotential& v, const LabeledPolyhedron& p, const Eigen::VectorXd& b,
               const DingOptions& opt) {
  const quad::QuadraturePlan pl = plan_or_not_in_E(p, b, opt.tail_tol);
  if (!pl.bounded) {
    const Eigen::VectorXd c = p.interior_point();
    const Cone rec = asymptotic_cone(p);
    for (const auto& r : rec.rays()) {
      const Eigen::VectorXd w = r.cast<double>().normalized();
      auto ratio = [&](double t) { return std::abs(v.value(c + t * w)) / (1.0 + t * t); };
      if (!(ratio(1000.0) <= 2.0 * ratio(10.0) + 1.0))
        throw Error(ErrorCode::NotInE, "|v| grows faster than quadratically along a recession ray");
    }
  }
  const double F = pl.integrate_exp();
  const Eigen::VectorXd sums = quad::integrate_many(
      pl,
      [&](const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> out) {
        out(0) = v.value(x) * std::exp(-b.dot(x));
        out(1) = std::exp(log_density(v, x));
      },
      2, opt.level_for(p.dim()));
  const double D1 = sums(1);
  if (!(D1 > 0) || !std::isfinite(D1)) throw Error(ErrorCode::DivergentD1, "D1 is not a positive finite number");
  certify_d1_tail(v, p, pl, D1);
  if (!std::isfinite(sums(0))) throw Error(ErrorCode::NotInE, "v e^{-<b,x>} is not integrable");
  return {0.0, D1, sums(0) / F - std::log(D1)};
}

std::vector<DingValue> convexity_scan(const SymplecticPotential& v0, const SymplecticPotential& v1,
                                      const LabeledPolyhedron& p, const Eigen::VectorXd& b, int num_t,
                                      const DingOptions& opt) {
  if (num_t < 2) throw Error(ErrorCode::InvalidArgument, "a scan needs at least two points");
  std::vector<DingValue> out;
  for (int i = 0; i < num_t; ++i) {
    const double t = static_cast<double>(i) / (num_t - 1);
    DingValue d = ding(geodesic_point(v0, v1, t), p, b, opt);
    d.t = t;
    out.push_back(d);
  }
  return out;
}

ScanAnalysis analyze_scan(const std::vector<DingValue>& scan, const SymplecticPotential& v0,
                          const SymplecticPotential& v1, const LabeledPolyhedron& p, std::uint64_t seed) {
  ScanAnalysis a;
  a.min_second_difference = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < scan.size(); ++i)
    a.min_second_difference = std::min(a.min_second_difference, scan[i - 1].D - 2.0 * scan[i].D + scan[i + 1].D);
  if (scan.size() < 3) a.min_second_difference = 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& d : scan) {
    lo = std::min(lo, d.D);
    hi = std::max(hi, d.D);
  }
  a.spread = scan.empty() ? 0.0 : hi - lo;

  const auto pts = sample_interior(p, 200, seed);
  const int n = p.dim();
  Eigen::MatrixXd A(pts.size(), n + 1);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    A(static_cast<Eigen::Index>(i), 0) = 1.0;
    A.block(static_cast<Eigen::Index>(i), 1, 1, n) = pts[i].transpose();
    y(static_cast<Eigen::Index>(i)) = v1.value(pts[i]) - v0.value(pts[i]);
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  a.affine_fit_residual = (A * coef - y).cwiseAbs().maxCoeff();
  a.affine_slope = coef.tail(n);
  return a;
}

std::string ding_csv(const std::vector<DingValue>& scan) {
  std::string out = "t,D1,D\n";
  char buf[96];
  for (const auto& d : scan) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", d.t, d.D1, d.D);
    out += buf;
  }
  return out;
}

}  // namespace toric

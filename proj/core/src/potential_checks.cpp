#include "toric/potential_checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "toric/error.hpp"
#include "toric/quadrature.hpp"

namespace toric {

namespace {

constexpr int kLadderSteps = 6;

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

}  // namespace

Eigen::VectorXd ladder_point(const LabeledPolyhedron& p, std::size_t facet, double distance) {
  const Eigen::VectorXd c = p.interior_point();
  const Eigen::VectorXd f = facet_point(p, facet);
  const double lc = p.slacks(c)(static_cast<Eigen::Index>(facet));
  return f + (distance / lc) * (c - f);
}

bool settles(const std::vector<double>& q, double floor_rel) {
  const std::size_t m = q.size();
  if (m < 4) return false;
  double scale = 0.0;
  for (double v : q) {
    if (!std::isfinite(v)) return false;
    scale = std::max(scale, std::abs(v));
  }
  const double early = std::max(std::abs(q[1] - q[0]), std::abs(q[2] - q[1]));
  const double late = std::max(std::abs(q[m - 1] - q[m - 2]), std::abs(q[m - 2] - q[m - 3]));
  return late <= 0.5 * early + floor_rel * (1.0 + scale);
}

BoundaryReport check_boundary_conditions(const SymplecticPotential& u, const LabeledPolyhedron& p) {
  BoundaryReport rep;
  rep.correction_smooth = true;
  rep.det_positive = true;
  const Eigen::VectorXd c = p.interior_point();
  const int n = p.dim();
  for (std::size_t i = 0; i < p.num_facets(); ++i) {
    FacetCheck fc;
    fc.facet = i;
    const double start = std::min(1.0, p.slacks(c)(static_cast<Eigen::Index>(i)));
    try {
      for (int k = 1; k <= kLadderSteps; ++k) {
        LadderSample s;
        s.distance = start * std::pow(10.0, -k);
        s.x = ladder_point(p, i, s.distance);
        s.correction = u.correction_jet(s.x);
        const Jet full = u.jet(s.x);
        s.det_product = full.hess.determinant() * p.slacks(s.x).prod();
        fc.ladder.push_back(std::move(s));
      }
    } catch (const Error& e) {
      fc.reason = std::string("evaluation failed on the ladder: ") + e.what();
      rep.correction_smooth = rep.det_positive = false;
      rep.facets.push_back(std::move(fc));
      continue;
    }

    // (i): s, ∇s and Hess s entrywise.
    fc.correction_bounded = true;
    auto check = [&](auto extract, const std::string& what) {
      std::vector<double> q;
      for (const auto& s : fc.ladder) q.push_back(extract(s.correction));
      if (!settles(q) && fc.correction_bounded) {
        fc.correction_bounded = false;
        std::ostringstream os;
        os << what << " does not settle toward facet " << i << " (last values " << q[q.size() - 2] << ", "
           << q.back() << ")";
        fc.reason = os.str();
      }
    };
    check([](const Jet& j) { return j.value; }, "s");
    for (int a = 0; a < n; ++a) check([a](const Jet& j) { return j.grad(a); }, "ds/dx" + std::to_string(a));
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        check([a, b](const Jet& j) { return j.hess(a, b); },
              "d2s/dx" + std::to_string(a) + "dx" + std::to_string(b));

    // (ii)
    std::vector<double> q;
    for (const auto& s : fc.ladder) q.push_back(s.det_product);
    const double last = q.back();
    fc.det_limit = last + (last - q[q.size() - 2]) / 9.0;
    const double scale = *std::max_element(q.begin(), q.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
    fc.det_product_positive = std::all_of(q.begin(), q.end(), [](double v) { return std::isfinite(v) && v > 0; }) &&
                              settles(q) && fc.det_limit > 1e-8 * std::abs(scale);
    if (!fc.det_product_positive && fc.reason.empty()) {
      std::ostringstream os;
      os << "det(Hess u) * prod L has no positive finite limit at facet " << i << " (extrapolated " << fc.det_limit
         << ")";
      fc.reason = os.str();
    }
    rep.correction_smooth = rep.correction_smooth && fc.correction_bounded;
    rep.det_positive = rep.det_positive && fc.det_product_positive;
    rep.facets.push_back(std::move(fc));
  }
  return rep;
}

std::string BoundaryReport::summary() const {
  std::ostringstream os;
  os << "(i) u - u_P smooth: " << verdict(correction_smooth) << "; (ii) det(Hess u) prod L positive: "
     << verdict(det_positive);
  for (const auto& f : facets)
    if (!f.reason.empty()) os << "; facet " << f.facet << ": " << f.reason;
  return os.str();
}

std::string EReport::summary() const {
  std::ostringstream os;
  os << "convex: " << verdict(convex) << "; u - u_P smooth: " << verdict(correction_smooth)
     << "; gradient surjective (directional probe): " << verdict(gradient_surjective)
     << "; integrable: " << verdict(integrable);
  for (const auto& r : reasons) os << "; " << r;
  return os.str();
}

EReport check_space_E(const SymplecticPotential& u, const LabeledPolyhedron& p, const Eigen::VectorXd& b,
                      std::uint64_t seed) {
  EReport rep;
  const Eigen::VectorXd c = p.interior_point();

  // Convexity on interior samples and on the facet ladders.
  rep.convex = true;
  auto samples = sample_interior(p, 200, seed);
  for (std::size_t i = 0; i < p.num_facets(); ++i)
    for (int k = 1; k <= kLadderSteps; ++k)
      samples.push_back(ladder_point(p, i, std::min(1.0, p.slacks(c)(static_cast<Eigen::Index>(i))) * std::pow(10.0, -k)));
  for (const auto& x : samples) {
    bool ok = false;
    try {
      ok = positive_definite(u.jet(x).hess);
    } catch (const Error&) {
    }
    if (!ok) {
      rep.convex = false;
      std::ostringstream os;
      os << "Hess u not positive definite at x = (" << x.transpose() << ")";
      rep.reasons.push_back(os.str());
      break;
    }
  }

  rep.boundary = check_boundary_conditions(u, p);
  rep.correction_smooth = rep.boundary.correction_smooth;
  if (!rep.correction_smooth) rep.reasons.push_back(rep.boundary.summary());

  // Surjectivity: the outward gradient component must blow up toward each facet,
  // and <∇u, w> must keep growing along every recession ray w.
  rep.gradient_surjective = true;
  auto grows = [](const std::vector<double>& g) {
    for (std::size_t k = 1; k < g.size(); ++k)
      if (!std::isfinite(g[k]) || !(g[k] > g[k - 1])) return false;
    return g.back() - g[g.size() - 2] >= 0.05;
  };
  for (std::size_t i = 0; i < p.num_facets() && rep.gradient_surjective; ++i) {
    const Eigen::VectorXd out = -p.A().row(static_cast<Eigen::Index>(i)).transpose().normalized();
    std::vector<double> g;
    try {
      for (int k = 1; k <= kLadderSteps; ++k) {
        const double d = std::min(1.0, p.slacks(c)(static_cast<Eigen::Index>(i))) * std::pow(10.0, -k);
        g.push_back(u.jet(ladder_point(p, i, d)).grad.dot(out));
      }
    } catch (const Error&) {
      g.clear();
    }
    if (g.empty() || !grows(g)) {
      rep.gradient_surjective = false;
      rep.reasons.push_back("gradient stays bounded toward facet " + std::to_string(i));
    }
  }
  const Cone rec = asymptotic_cone(p);
  for (const auto& r : rec.rays()) {
    if (!rep.gradient_surjective) break;
    const Eigen::VectorXd w = r.cast<double>().normalized();
    std::vector<double> g;
    try {
      for (int k = 1; k <= 4; ++k) g.push_back(u.jet(c + std::pow(10.0, k) * w).grad.dot(w));
    } catch (const Error&) {
      g.clear();
    }
    if (g.empty() || !grows(g)) {
      rep.gradient_surjective = false;
      std::ostringstream os;
      os << "gradient does not grow along recession ray (" << w.transpose() << ")";
      rep.reasons.push_back(os.str());
    }
  }

  // Integrability of |u| e^{-<b,x>}.
  try {
    const quad::QuadraturePlan pl = quad::plan(p, b, 1e-10);
    bool tail_ok = true;
    for (const auto& r : rec.rays()) {
      const Eigen::VectorXd w = r.cast<double>().normalized();
      auto ratio = [&](double t) { return std::abs(u.value(c + t * w)) / (1.0 + t * t); };
      if (!(ratio(1000.0) <= 2.0 * ratio(10.0) + 1.0)) tail_ok = false;
    }
    rep.weighted_l1 = quad::integrate(pl, [&](const Eigen::VectorXd& x) {
      return std::abs(u.value(x)) * std::exp(-b.dot(x));
    });
    rep.integrable = tail_ok && std::isfinite(rep.weighted_l1);
    if (!rep.integrable) rep.reasons.push_back("|u| grows faster than quadratically along a recession ray");
  } catch (const Error& e) {
    rep.integrable = false;
    rep.reasons.push_back(std::string("integrability: ") + e.what());
  }
  return rep;
}

}  // namespace toric

#include <cmath>
#include <numbers>
#include <vector>

#include "toric/error.hpp"
#include "toric/quadrature.hpp"

namespace toric::quad {

namespace {

// Tanh-sinh rule on [0,1]. Each node keeps both r and 1 - r so points next to
// either end are formed without cancellation.
struct Node {
  double r;
  double rc;
  double w;
};

std::vector<Node> tanh_sinh(int level) {
  if (level < 1 || level > 10) throw Error(ErrorCode::InvalidArgument, "quadrature level must be in 1..10");
  const double h = std::ldexp(1.0, -level);
  std::vector<Node> nodes;
  for (int k = 0;; ++k) {
    const double t = k * h;
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double e = std::exp(-2.0 * u);
    const double r = 1.0 / (1.0 + e);
    const double rc = e / (1.0 + e);
    if (rc < 1e-13) break;
    const double w = h * 0.5 * std::numbers::pi * std::cosh(t) * 2.0 * r * rc;
    nodes.push_back({r, rc, w});
    if (k > 0) nodes.push_back({rc, r, w});
  }
  return nodes;
}

// Bisects simplices across which the weight exponent varies by more than
// kMaxSpread, so that the fixed rule sees a mildly varying integrand.
constexpr double kMaxSpread = 8.0;

void refine(const Simplex& s, const Eigen::VectorXd& b, int depth, std::vector<Simplex>& out) {
  const auto& v = s.vertices;
  int bi = 0, bj = 0;
  double spread = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double d = std::abs(b.dot(v[i] - v[j]));
      if (d > spread) {
        spread = d;
        bi = static_cast<int>(i);
        bj = static_cast<int>(j);
      }
    }
  if (spread <= kMaxSpread || depth >= 12) {
    out.push_back(s);
    return;
  }
  const Eigen::VectorXd mid = 0.5 * (v[bi] + v[bj]);
  auto left = v, right = v;
  left[bj] = mid;
  right[bi] = mid;
  refine(Simplex::make(std::move(left)), b, depth + 1, out);
  refine(Simplex::make(std::move(right)), b, depth + 1, out);
}

}  // namespace

Eigen::VectorXd integrate_many(const QuadraturePlan& plan,
                               const std::function<void(const Eigen::VectorXd&, Eigen::Ref<Eigen::VectorXd>)>& f,
                               int count, int level) {
  const auto nodes = tanh_sinh(level);
  std::vector<CompensatedSum> acc(count);
  Eigen::VectorXd val(count);
  Eigen::VectorXd x(plan.dim);
  auto accumulate = [&](double weight) {
    val.setZero();
    f(x, val);
    for (int j = 0; j < count; ++j) acc[j].add(weight * val(j));
  };

  std::vector<Simplex> pieces;
  for (const auto& s : plan.simplices) refine(s, plan.weight, 0, pieces);
  for (const auto& s : pieces) {
    if (s.volume == 0.0) continue;
    const auto& v = s.vertices;
    if (plan.dim == 1) {
      const double len = v[1](0) - v[0](0);
      for (const auto& nd : nodes) {
        x(0) = nd.r < 0.5 ? v[0](0) + nd.r * len : v[1](0) - nd.rc * len;
        accumulate(nd.w * std::abs(len));
      }
    } else if (plan.dim == 2) {
      // x = q(s) + (1 - r)(apex - q(s)), q on the base edge.
      for (const auto& ns : nodes) {
        const Eigen::VectorXd q = ns.r < 0.5 ? Eigen::VectorXd(v[1] + ns.r * (v[2] - v[1]))
                                             : Eigen::VectorXd(v[2] + ns.rc * (v[1] - v[2]));
        for (const auto& nr : nodes) {
          x = q + nr.rc * (v[0] - q);
          accumulate(ns.w * nr.w * 2.0 * s.volume * nr.r);
        }
      }
    } else if (plan.dim == 3) {
      // Base triangle (v1, v2, v3) in collapsed coordinates, coned to v0.
      for (const auto& nt : nodes) {
        const Eigen::VectorXd e = nt.r < 0.5 ? Eigen::VectorXd(v[2] + nt.r * (v[3] - v[2]))
                                             : Eigen::VectorXd(v[3] + nt.rc * (v[2] - v[3]));
        for (const auto& ns : nodes) {
          const Eigen::VectorXd q = e + ns.rc * (v[1] - e);
          for (const auto& nr : nodes) {
            x = q + nr.rc * (v[0] - q);
            accumulate(nt.w * ns.w * nr.w * 6.0 * s.volume * nr.r * nr.r * ns.r);
          }
        }
      }
    } else {
      throw Error(ErrorCode::UnsupportedDimension, "smooth quadrature supports dimensions 1..3");
    }
  }
  Eigen::VectorXd out(count);
  for (int j = 0; j < count; ++j) out(j) = acc[j].value();
  return out;
}

double integrate(const QuadraturePlan& plan, const std::function<double(const Eigen::VectorXd&)>& f, int level) {
  return integrate_many(
      plan, [&](const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> out) { out(0) = f(x); }, 1, level)(0);
}

}  // namespace toric::quad

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "toric/ding.hpp"
#include "toric/error.hpp"
#include "toric/potential_checks.hpp"
#include "toric/quadrature.hpp"
#include "toric/shrinker.hpp"

using namespace toric;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double affine_residual(const std::vector<Eigen::VectorXd>& xs, const std::vector<double>& f) {
  const int n = static_cast<int>(xs.size()), d = static_cast<int>(xs[0].size());
  Eigen::MatrixXd A(n, d + 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A.row(i).tail(d) = xs[i].transpose();
    y[i] = f[i];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  return (A * c - y).cwiseAbs().maxCoeff();
}

double stddev(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

// Closed-form shrinker potentials written as explicit facet terms, not as u_P.
SymplecticPotential gaussian_closed_form(std::shared_ptr<const LabeledPolyhedron> h) {
  return SymplecticPotential(h, 0.0, {PotentialTerm::facet_log(0, 0.5)});
}
SymplecticPotential sphere_closed_form(std::shared_ptr<const LabeledPolyhedron> i) {
  return SymplecticPotential(i, 0.0, {PotentialTerm::facet_log(0, 0.5), PotentialTerm::facet_log(1, 0.5)});
}

Verdict c1() {
  const auto sv = find_soliton_vector(fixtures::half_line());
  const double err = std::abs(sv.b[0] - 0.5);
  return {err <= 1e-8, "|b - 1/2| = " + fmt(err)};
}

Verdict c2() {
  const double a = find_soliton_vector(fixtures::interval()).b.norm();
  const double s = find_soliton_vector(fixtures::square()).b.norm();
  return {a <= 1e-10 && s <= 1e-10, "|b| interval " + fmt(a) + ", square " + fmt(s)};
}

Verdict c3() {
  const auto H = fixtures::shared(fixtures::half_line());
  const auto I = fixtures::shared(fixtures::interval());
  double worst = 0;
  std::ostringstream d;
  auto spread = [&](const SymplecticPotential& u, const Eigen::VectorXd& b, const LabeledPolyhedron& p,
                    const char* name) {
    std::vector<double> r;
    for (const auto& x : sample_interior(p, 200, 42)) r.push_back(residual(u, b, x));
    const double s = stddev(r);
    worst = std::max(worst, s);
    d << name << " " << fmt(s) << " ";
  };
  spread(gaussian_closed_form(H), vec({0.5}), *H, "gaussian");
  spread(sphere_closed_form(I), vec({0}), *I, "sphere");
  // The same on the solver's grid potentials.
  spread(solve(H, find_soliton_vector(*H)).potential, vec({0.5}), *H, "gaussian-grid");
  spread(solve(I, find_soliton_vector(*I)).potential, vec({0}), *I, "sphere-grid");
  return {worst <= 1e-9, "residual std: " + d.str()};
}

Verdict c4() {
  std::ostringstream d;
  bool ok = true;
  for (const bool half : {false, true}) {
    const auto start = std::chrono::steady_clock::now();
    const auto p = fixtures::shared(half ? fixtures::half_line() : fixtures::interval());
    const auto sv = find_soliton_vector(*p);
    const auto r = solve(p, sv);
    const auto exact = half ? gaussian_closed_form(p) : sphere_closed_form(p);
    const double hi = half ? r.truncation / sv.b[0] : 2.0;
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> diff;
    for (int i = 0; i <= 200; ++i) {
      const Eigen::VectorXd x = vec({-2 + (0.2 + 0.6 * i / 200.0) * (hi + 2)});
      xs.push_back(x);
      diff.push_back(r.potential.value(x) - exact.value(x));
    }
    const double e = affine_residual(xs, diff);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && e <= 1e-6 && secs < 30;
    d << (half ? "gaussian " : "sphere ") << fmt(e) << " in " << fmt(secs) << " s; ";
  }
  return {ok, "sup error after affine fit: " + d.str()};
}

Verdict c5() {
  const auto p = fixtures::shared(fixtures::teardrop(3));
  const std::string g0 = structure_group(*p, {0}).to_string(), g1 = structure_group(*p, {1}).to_string();
  const auto sv = find_soliton_vector(*p);
  const auto r = solve(p, sv);
  const double lo = -2.0, hi = 2.0 / 3.0, w = hi - lo;
  const auto orc = oracle::teardrop_shooting(lo, hi, 3.0, lo + 0.05 * w, hi - 0.05 * w, 20000);
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> diff;
  for (std::size_t i = 0; i < orc.x.size(); i += 20) {
    xs.push_back(vec({orc.x[i]}));
    diff.push_back(r.potential.correction_jet(xs.back()).value - orc.s[i]);
  }
  const double e = affine_residual(xs, diff);
  const double db = std::abs(sv.b[0] - orc.b);
  const bool ok = g0 == "Z/1" && g1 == "Z/3" && r.residual_deviation <= 1e-9 && e <= 1e-4 && db <= 1e-8;
  return {ok, "groups " + g0 + ", " + g1 + "; |b - b_ode| = " + fmt(db) + "; |s - s_ode| (affine-gauged) = " + fmt(e) +
                  "; residual deviation " + fmt(r.residual_deviation)};
}

Verdict c6() {
  std::vector<LabeledPolyhedron> ps{fixtures::interval(), fixtures::half_line(), fixtures::teardrop(3),
                                    fixtures::square(),   fixtures::quadrant(),  fixtures::triangle(),
                                    fixtures::strip(),    fixtures::labeled_triangle(), fixtures::octant(),
                                    fixtures::cube()};
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 0.6);
  auto random_b = [&](const LabeledPolyhedron& p) {
    const auto sv = find_soliton_vector(p);
    while (true) {
      Eigen::VectorXd b = sv.b;
      for (auto& x : b) x += g(rng);
      if (!quad::divergence_witness(p, b) && (b - sv.b).norm() > 0.05) {
        // Keep a margin inside the dual cone.
        if (!quad::divergence_witness(p, b - 0.1 * (b - sv.b))) return b;
      }
    }
  };
  double worst_g = 0, worst_h = 0;
  for (const auto& p : ps) {
    const Eigen::VectorXd b = random_b(p);
    const auto d = grad_hess_F(p, b);
    const double h = 1e-4;
    const Eigen::VectorXd fg = oracle::fd_gradient([&](const Eigen::VectorXd& z) { return weighted_volume(p, z); }, b, h);
    worst_g = std::max(worst_g, (fg - d.gradient).norm() / std::max(d.gradient.norm(), d.value));
    Eigen::MatrixXd fh(p.dim(), p.dim());
    for (int k = 0; k < p.dim(); ++k)
      fh.row(k) = oracle::fd_gradient([&](const Eigen::VectorXd& z) { return grad_hess_F(p, z).gradient[k]; }, b, h)
                      .transpose();
    worst_h = std::max(worst_h, (fh - d.hessian).norm() / d.hessian.norm());
  }
  int pd = 0;
  for (int i = 0; i < 20; ++i) {
    const auto& p = ps[static_cast<std::size_t>(i) % ps.size()];
    const auto H = grad_hess_F(p, random_b(p)).hessian;
    pd += Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues().minCoeff() > 0;
  }
  return {worst_g <= 1e-6 && worst_h <= 1e-6 && pd == 20,
          "rel. error gradient " + fmt(worst_g) + ", Hessian " + fmt(worst_h) + "; PD at " + std::to_string(pd) + "/20"};
}

Verdict c7() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::normal_distribution<double> g;
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const int d = 1 + t % 3;
    std::vector<Eigen::VectorXd> vs;
    for (int i = 0; i <= d; ++i) {
      Eigen::VectorXd v(d);
      for (auto& x : v) x = u(rng);
      vs.push_back(v);
    }
    Eigen::VectorXd b(d);
    for (auto& x : b) x = g(rng);
    const double got = quad::exp_integral_simplex(quad::Simplex::make(vs), b);
    const double ref = oracle::simplex_integral(vs, [&](const Eigen::VectorXd& x) { return std::exp(-b.dot(x)); }, 30);
    worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
  }
  return {worst <= 1e-8, "max rel. error " + fmt(worst)};
}

Verdict c8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  struct Dom {
    std::shared_ptr<const LabeledPolyhedron> p;
    Eigen::VectorXd lo, hi;
  };
  std::vector<Dom> doms{{fixtures::shared(fixtures::interval()), vec({-2}), vec({2})},
                        {fixtures::shared(fixtures::teardrop(3)), vec({-2}), vec({2.0 / 3.0})},
                        {fixtures::shared(fixtures::half_line()), vec({-2}), vec({4})},
                        {fixtures::shared(fixtures::square()), vec({-2, -2}), vec({2, 2})}};
  // Random admissible endpoint: u_P + a compact bump small enough to keep convexity + an affine term.
  auto endpoint = [&](const Dom& d) {
    const auto& p = *d.p;
    const int n = p.dim();
    Eigen::VectorXd c(n), r(n), s(n);
    for (int k = 0; k < n; ++k) {
      const double w = d.hi[k] - d.lo[k];
      r[k] = w * (0.1 + 0.15 * un(rng));
      c[k] = d.lo[k] + r[k] + (w - 2 * r[k]) * un(rng);
      s[k] = un(rng) - 0.5;
    }
    double m = 1e300;
    for (int i = 0; i <= 8; ++i) {
      Eigen::VectorXd x = c;
      for (int k = 0; k < n; ++k) x[k] = c[k] - r[k] + 2 * r[k] * i / 8.0;
      m = std::min(m, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(guillemin_jet(p, x).hess).eigenvalues().minCoeff());
    }
    const double amp = (un(rng) < 0.5 ? -1 : 1) * 0.02 * m * r.minCoeff() * r.minCoeff();
    return guillemin_potential(d.p).plus(PotentialTerm::bump(amp, c, r)).plus(PotentialTerm::affine(un(rng), s));
  };
  double worst = 1e300;
  int geodesics = 0;
  for (int i = 0; i < 20; ++i) {
    const Dom& d = doms[static_cast<std::size_t>(i) % doms.size()];
    const auto sv = find_soliton_vector(*d.p);
    const auto v0 = endpoint(d), v1 = endpoint(d);
    const auto scan = convexity_scan(v0, v1, *d.p, sv.b, 9);
    worst = std::min(worst, analyze_scan(scan, v0, v1, *d.p).min_second_difference);
    ++geodesics;
  }
  // Rigidity: two affine gauges of the teardrop solution.
  const auto td = fixtures::shared(fixtures::teardrop(3));
  const auto sv = find_soliton_vector(*td);
  const auto sol = solve(td, sv).potential;
  const auto v0 = sol.plus(PotentialTerm::affine(0.3, vec({-0.4})));
  const auto v1 = sol.plus(PotentialTerm::affine(-1.1, vec({0.9})));
  const auto scan = convexity_scan(v0, v1, *td, sv.b, 9);
  const auto a = analyze_scan(scan, v0, v1, *td);
  const bool ok = worst >= -1e-6 && a.flat() && a.endpoints_affine();
  return {ok, "min second difference over " + std::to_string(geodesics) + " geodesics " + fmt(worst) +
                  "; gauged copies: spread " + fmt(a.spread) + ", affine residual " + fmt(a.affine_fit_residual)};
}

Verdict c9() {
  long checked = 0, mismatches = 0, singular = 0;
  for (std::int64_t a = -6; a <= 6; ++a)
    for (std::int64_t b = -6; b <= 6; ++b)
      for (std::int64_t c = -6; c <= 6; ++c)
        for (std::int64_t d = -6; d <= 6; ++d) {
          const std::int64_t det = a * d - b * c;
          if (std::abs(det) > 24) continue;
          IntMatrix m(2, 2);
          m << a, b, c, d;
          if (det == 0) {
            try {
              lattice::quotient_group(m, 2);
              ++mismatches;
            } catch (const Error& e) {
              if (e.code() != ErrorCode::NotFullRank) ++mismatches;
            }
            ++singular;
            continue;
          }
          const auto q = lattice::quotient_group(m, 2);
          const auto ref = oracle::coset_enumeration(a, b, c, d);
          if (q.invariant_factors != ref.invariants || q.order() != ref.cosets || ref.cosets != std::abs(det))
            ++mismatches;
          ++checked;
        }
  return {mismatches == 0, std::to_string(checked) + " full-rank matrices (entries in [-6, 6]), " +
                               std::to_string(singular) + " singular, " + std::to_string(mismatches) + " mismatches"};
}

Verdict c10() {
  std::vector<LabeledPolyhedron> ps{fixtures::interval(), fixtures::half_line(), fixtures::teardrop(3),
                                    fixtures::square(), fixtures::labeled_triangle()};
  int good = 0;
  for (const auto& p : ps) {
    const auto sp = fixtures::shared(p);
    const auto u = guillemin_potential(sp);
    const auto bump =
        u.plus(PotentialTerm::bump(0.05, p.interior_point(), Eigen::VectorXd::Constant(p.dim(), 0.5)));
    const auto doubled = u.plus(PotentialTerm::facet_log(0, 1.0));
    good += check_boundary_conditions(u, p).passed() && check_boundary_conditions(bump, p).passed() &&
            !check_boundary_conditions(doubled, p).passed();
  }
  return {good == 5, std::to_string(good) + "/5 polyhedra classified correctly"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Gaussian soliton vector", 1.0, c1},
      {2, "symmetric soliton vectors", 1.0, c2},
      {3, "closed-form residual constancy", 1.0, c3},
      {4, "1D solver recovers known solutions", 60.0, c4},
      {5, "teardrop orbifold", 120.0, c5},
      {6, "weighted-volume derivatives", 10.0, c6},
      {7, "simplex quadrature vs dense Gauss", 10.0, c7},
      {8, "Ding convexity and rigidity", 120.0, c8},
      {9, "structure groups vs coset enumeration", 5.0, c9},
      {10, "boundary-condition detector", 10.0, c10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %d (%s): %s [%.3f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

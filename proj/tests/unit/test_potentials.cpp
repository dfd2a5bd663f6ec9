#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "toric/error.hpp"
#include "toric/potential_checks.hpp"
#include "toric/potentials.hpp"

using namespace toric;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::vector<LabeledPolyhedron> test_polyhedra() {
  return {fixtures::interval(), fixtures::half_line(), fixtures::teardrop(3), fixtures::square(),
          fixtures::quadrant(), fixtures::labeled_triangle(), fixtures::cube()};
}

SymplecticPotential quadratic_on_box(double half_width) {
  auto p = fixtures::shared(fixtures::make(1, {{{1}, 1, static_cast<long long>(half_width)},
                                              {{-1}, 1, static_cast<long long>(half_width)}}));
  return SymplecticPotential(p, 0.0, {PotentialTerm::quadratic(Eigen::MatrixXd::Identity(1, 1), vec({0}))});
}

}  // namespace

TEST_CASE("canonical potential values") {
  const auto I = fixtures::interval();
  const auto H = fixtures::half_line();
  CHECK(guillemin_jet(I, vec({0})).value == doctest::Approx(2 * std::log(2.0)).epsilon(1e-15));
  CHECK(guillemin_jet(H, vec({0})).value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(kahler_potential_canonical(I, vec({0})) == doctest::Approx(-2 * std::log(2.0)).epsilon(1e-15));
  CHECK(kahler_potential_canonical(H, vec({0})) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));

  const auto m = metric(guillemin_potential(I), vec({0}));
  CHECK(m.G(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.H(0, 0) == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(guillemin_jet(I, vec({2.0})), Error);
  CHECK_THROWS_AS(guillemin_jet(I, vec({3.0})), Error);
}

TEST_CASE("canonical potential identities on samples") {
  for (const auto& p : test_polyhedra()) {
    const auto u = guillemin_potential(p);
    const auto xs = sample_interior(p, 100, 17);
    for (const auto& x : xs) {
      const Jet j = guillemin_jet(p, x);
      // Hessian formula ½ Σ (m n)(m n)ᵀ / L.
      Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(p.dim(), p.dim());
      const Eigen::VectorXd L = p.slacks(x);
      for (Eigen::Index i = 0; i < p.A().rows(); ++i)
        ref += 0.5 * p.A().row(i).transpose() * p.A().row(i) / L[i];
      CHECK((j.hess - ref).norm() <= 1e-10 * std::max(1.0, ref.norm()));
      CHECK(positive_definite(j.hess));

      // Finite differences of the gradient, with a step that stays inside P.
      const double h = 1e-5 * std::min(1.0, L.minCoeff());
      auto grad_k = [&](int k) {
        return [&, k](const Eigen::VectorXd& z) { return guillemin_jet(p, z).grad[k]; };
      };
      for (int k = 0; k < p.dim(); ++k) {
        const Eigen::VectorXd row = oracle::fd_gradient(grad_k(k), x, h);
        CHECK((row - j.hess.row(k).transpose()).norm() <= 1e-6 * std::max(1.0, j.hess.norm()));
      }

      // Legendre identity and involution.
      const auto lp = legendre(u, x);
      CHECK(lp.phi + j.value == doctest::Approx(lp.y.dot(x)).epsilon(1e-12));
      CHECK(std::abs(kahler_potential_canonical(p, x) - lp.phi) <= 1e-9 * std::max(1.0, std::abs(lp.phi)));
      const Eigen::VectorXd back = inverse_legendre(u, lp.y);
      CHECK((back - x).norm() <= 1e-8 * std::max(1.0, x.norm()));

      const auto md = metric(u, x);
      CHECK((md.G * md.H - Eigen::MatrixXd::Identity(p.dim(), p.dim())).norm() <= 1e-10);
    }
  }
}

TEST_CASE("third derivatives match finite differences of the Hessian") {
  const auto p = fixtures::labeled_triangle();
  for (const auto& x : sample_interior(p, 20, 3)) {
    const auto t = guillemin_third(p, x);
    const double h = 1e-5 * std::min(1.0, p.slacks(x).minCoeff());
    for (int k = 0; k < p.dim(); ++k) {
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const Eigen::MatrixXd fd = (guillemin_jet(p, xp).hess - guillemin_jet(p, xm).hess) / (2 * h);
      CHECK((fd - t[k]).norm() <= 1e-5 * std::max(1.0, t[k].norm()));
    }
  }
}

TEST_CASE("quadratic potential is self-dual") {
  const auto u = quadratic_on_box(50);
  for (double x : {-3.0, 0.0, 1.5, 7.0}) {
    const auto lp = legendre(u, vec({x}));
    CHECK(lp.y[0] == doctest::Approx(x));
    CHECK(lp.phi == doctest::Approx(0.5 * x * x));
    CHECK(metric(u, vec({x})).G(0, 0) == doctest::Approx(1.0));
  }
}

TEST_CASE("gradient blows up toward the facets") {
  const auto u = guillemin_potential(fixtures::interval());
  double prev = 0;
  for (double d : {1e-1, 1e-3, 1e-6, 1e-9}) {
    const double x = 2 - d;
    const double y = legendre(u, vec({x})).y[0];
    CHECK(y == doctest::Approx(0.5 * std::log((2 + x) / (2 - x))).epsilon(1e-12));
    CHECK(y > prev);
    prev = y;
  }
}

TEST_CASE("potential terms") {
  const auto p = fixtures::shared(fixtures::square());
  const auto bump = PotentialTerm::bump(0.3, vec({0.2, -0.1}), vec({0.8, 0.9}));
  const auto fl = PotentialTerm::facet_log(1, 0.5);
  const auto aff = PotentialTerm::affine(1.5, vec({0.2, -0.7}));
  for (const auto& t : {bump, fl, aff}) {
    for (const auto& x : sample_interior(*p, 30, 5)) {
      const Jet j = t.jet(*p, x);
      const double h = 1e-6;
      const Eigen::VectorXd g = oracle::fd_gradient([&](const Eigen::VectorXd& z) { return t.jet(*p, z).value; }, x, h);
      CHECK((g - j.grad).norm() <= 1e-6 * std::max(1.0, j.grad.norm()));
    }
  }
  // Bump vanishes with two derivatives at its support edge.
  const Jet edge = bump.jet(*p, vec({1.0, 0.0}));
  CHECK(edge.value == 0.0);
  CHECK(edge.grad.norm() == 0.0);

  const SymplecticPotential u(p, 1.0, {bump});
  CHECK(u.form() == SymplecticPotential::Form::ClosedForm);
  CHECK(guillemin_potential(p).form() == SymplecticPotential::Form::Canonical);
  const auto x = vec({0.3, 0.1});
  CHECK(u.correction_jet(x).value == doctest::Approx(bump.jet(*p, x).value));
  CHECK(u.scaled(2.0).value(x) == doctest::Approx(2 * u.value(x)));
  CHECK((u + u).value(x) == doctest::Approx(2 * u.value(x)));
  CHECK(geodesic_point(u, guillemin_potential(p), 0.25).value(x) ==
        doctest::Approx(0.75 * u.value(x) + 0.25 * guillemin_potential(p).value(x)));
}

TEST_CASE("grid corrections interpolate smooth functions") {
  cheb::Axis ax(24, -2, 2);
  Eigen::VectorXd vals(24);
  for (int i = 0; i < 24; ++i) vals[i] = std::sin(ax.nodes()[i]);
  auto g = std::make_shared<GridCorrection>(std::vector<cheb::Axis>{ax}, vals, std::vector<bool>{false},
                                            std::vector<bool>{true});
  for (double x : {-1.9, -0.3, 0.0, 1.2, 1.99}) {
    const Jet j = g->jet(vec({x}));
    CHECK(j.value == doctest::Approx(std::sin(x)).epsilon(1e-12));
    CHECK(j.grad[0] == doctest::Approx(std::cos(x)).epsilon(1e-10));
    CHECK(j.hess(0, 0) == doctest::Approx(-std::sin(x)).scale(1.0).epsilon(1e-8));
  }
  // Past the top end the continuation is affine.
  const Jet out = g->jet(vec({3.0}));
  const Jet top = g->jet(vec({2.0}));
  CHECK(out.hess(0, 0) == 0.0);
  CHECK(out.value == doctest::Approx(top.value + top.grad[0]).epsilon(1e-12));
}

TEST_CASE("boundary detector") {
  for (const auto& p : test_polyhedra()) {
    auto sp = fixtures::shared(p);
    const auto u = guillemin_potential(sp);
    const auto r0 = check_boundary_conditions(u, p);
    CHECK(r0.passed());

    const Eigen::VectorXd c = p.interior_point();
    const auto bump = u.plus(PotentialTerm::bump(0.05, c, Eigen::VectorXd::Constant(p.dim(), 0.5)));
    CHECK(check_boundary_conditions(bump, p).passed());

    const auto doubled = u.plus(PotentialTerm::facet_log(0, 1.0));
    const auto rd = check_boundary_conditions(doubled, p);
    CHECK_FALSE(rd.passed());
    CHECK_FALSE(rd.correction_smooth);
  }
}

TEST_CASE("ladder points approach the facet") {
  const auto p = fixtures::labeled_triangle();
  for (std::size_t i = 0; i < p.num_facets(); ++i)
    for (double d : {1e-1, 1e-4}) {
      const Eigen::VectorXd x = ladder_point(p, i, d);
      CHECK(p.slacks(x)[static_cast<Eigen::Index>(i)] == doctest::Approx(d).epsilon(1e-9));
      CHECK(p.interior_contains(x));
    }
  CHECK(settles({1.0, 1.5, 1.55, 1.555, 1.5555}));
  CHECK_FALSE(settles({1.0, 2.0, 3.0, 4.0, 5.0}));
}

TEST_CASE("space E checks") {
  const auto I = fixtures::shared(fixtures::interval());
  auto r = check_space_E(guillemin_potential(I), *I, vec({0}));
  CHECK(r.passed());
  CHECK(r.surjectivity_is_directional);
  CHECK(r.weighted_l1 > 0);

  const auto H = fixtures::shared(fixtures::half_line());
  r = check_space_E(guillemin_potential(H), *H, vec({0.5}));
  CHECK(r.passed());
  r = check_space_E(guillemin_potential(H), *H, vec({-1}));
  CHECK_FALSE(r.integrable);
  CHECK(r.convex);

  // Subtracting a large local quadratic bump breaks convexity.
  const auto dent = guillemin_potential(I).plus(PotentialTerm::bump(-5.0, vec({0}), vec({0.5})));
  r = check_space_E(dent, *I, vec({0}));
  CHECK_FALSE(r.convex);

  const auto doubled = guillemin_potential(I).plus(PotentialTerm::facet_log(0, 1.0));
  r = check_space_E(doubled, *I, vec({0}));
  CHECK_FALSE(r.correction_smooth);
}

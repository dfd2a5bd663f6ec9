#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "toric/error.hpp"
#include "toric/quadrature.hpp"

using namespace toric;
using quad::Simplex;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Simplex random_simplex(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Eigen::VectorXd> vs;
  for (int i = 0; i <= d; ++i) {
    Eigen::VectorXd v(d);
    for (auto& x : v) x = u(rng);
    vs.push_back(v);
  }
  return Simplex::make(vs);
}

// exp[s_0..s_m] for distinct nodes in 50-digit arithmetic.
double divided_difference_mp(const std::vector<double>& s) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  std::vector<Big> t(s.begin(), s.end()), f;
  for (const auto& x : t) f.push_back(exp(x));
  for (std::size_t k = 1; k < t.size(); ++k)
    for (std::size_t i = t.size() - 1; i >= k; --i) f[i] = (f[i] - f[i - 1]) / (t[i] - t[i - k]);
  return f.back().convert_to<double>();
}

}  // namespace

TEST_CASE("simplex exponential examples") {
  const Simplex unit = Simplex::make({vec({0}), vec({1})});
  CHECK(unit.volume == 1.0);
  CHECK(quad::exp_integral_simplex(unit, vec({0})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(quad::exp_integral_simplex(unit, vec({1})) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));

  const Simplex tri = Simplex::make({vec({0, 0}), vec({1, 0}), vec({0, 1})});
  const double ref = oracle::simplex_integral(tri.vertices, [](const Eigen::VectorXd& x) {
    return std::exp(-(x[0] + x[1]));
  });
  CHECK(quad::exp_integral_simplex(tri, vec({1, 1})) == doctest::Approx(ref).epsilon(1e-10));

  const Simplex flat = Simplex::make({vec({0, 0}), vec({1, 1}), vec({2, 2})});
  CHECK(quad::exp_integral_simplex(flat, vec({1, 0})) == 0.0);
}

TEST_CASE("divided differences against extended precision") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(1 + trial % 4);
    for (auto& x : s) x = u(rng);
    // Every fourth case clusters the nodes within 1e-6.
    if (trial % 4 == 3)
      for (std::size_t i = 1; i < s.size(); ++i) s[i] = s[0] + 1e-6 * static_cast<double>(i) * u(rng);
    const double ref = divided_difference_mp(s);
    CHECK(quad::exp_divided_difference(s) == doctest::Approx(ref).epsilon(1e-12));
  }
  // Fully confluent: exp[s, s, s] = e^s / 2.
  const std::vector<double> rep{0.7, 0.7, 0.7};
  CHECK(quad::exp_divided_difference(rep) == doctest::Approx(std::exp(0.7) / 2).epsilon(1e-14));
}

TEST_CASE("moments") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    const Simplex s = random_simplex(rng, d);
    Eigen::VectorXd b(d);
    for (auto& x : b) x = g(rng);
    const std::vector<int> zero(d, 0);
    CHECK(quad::moment_integral_simplex(s, b, zero) ==
          doctest::Approx(quad::exp_integral_simplex(s, b)).epsilon(1e-13));
    for (int j = 0; j < d; ++j)
      for (int k = j; k < d; ++k) {
        std::vector<int> alpha(d, 0);
        alpha[j] += 1;
        alpha[k] += 1;
        const double ref = oracle::simplex_integral(
            s.vertices, [&](const Eigen::VectorXd& x) { return x[j] * x[k] * std::exp(-b.dot(x)); }, 20);
        const double got = quad::moment_integral_simplex(s, b, alpha);
        CHECK(std::abs(got - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
      }
    std::vector<int> first(d, 0);
    first[0] = 1;
    const double ref1 = oracle::simplex_integral(
        s.vertices, [&](const Eigen::VectorXd& x) { return x[0] * std::exp(-b.dot(x)); }, 20);
    CHECK(std::abs(quad::moment_integral_simplex(s, b, first) - ref1) <= 1e-9 * std::max(1.0, std::abs(ref1)));
  }
  const Simplex iv = Simplex::make({vec({-2}), vec({2})});
  const std::vector<int> one{1}, three{3};
  CHECK(std::abs(quad::moment_integral_simplex(iv, vec({0}), one)) < 1e-14);
  CHECK_THROWS_AS(quad::moment_integral_simplex(iv, vec({0}), three), Error);
}

TEST_CASE("first moment on a truncated half-line tends to zero at b = 1/2") {
  double prev = 1e300;
  for (double T : {5.0, 10.0, 20.0, 40.0}) {
    // <b, x> <= T means x <= 2T.
    const Simplex s = Simplex::make({vec({-2}), vec({2 * T})});
    const std::vector<int> one{1};
    const double m = std::abs(quad::moment_integral_simplex(s, vec({0.5}), one));
    // Closed form of ∫_{-2}^{X} x e^{-x/2} dx = -2 e^{-X/2} (X + 2).
    const double X = 2 * T;
    CHECK(m == doctest::Approx(2 * std::exp(-X / 2) * (X + 2)).epsilon(1e-6));
    CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 1e-13);
}

TEST_CASE("additivity and translation covariance") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 3;
    const Simplex s = random_simplex(rng, d);
    Eigen::VectorXd b(d);
    for (auto& x : b) x = g(rng);
    const double whole = quad::exp_integral_simplex(s, b);

    const Eigen::VectorXd mid = 0.5 * (s.vertices[0] + s.vertices[1]);
    auto a = s.vertices, c = s.vertices;
    a[1] = mid;
    c[0] = mid;
    const double parts = quad::exp_integral_simplex(Simplex::make(a), b) + quad::exp_integral_simplex(Simplex::make(c), b);
    CHECK(parts == doctest::Approx(whole).epsilon(1e-12));

    Eigen::VectorXd shift(d);
    for (auto& x : shift) x = g(rng);
    auto moved = s.vertices;
    for (auto& v : moved) v += shift;
    const double t = quad::exp_integral_simplex(Simplex::make(moved), b);
    CHECK(t == doctest::Approx(std::exp(-b.dot(shift)) * whole).epsilon(1e-10));
  }
}

TEST_CASE("plans") {
  auto p = quad::plan(fixtures::interval(), vec({0.7}), 1e-12);
  CHECK(p.bounded);
  CHECK(std::isinf(p.truncation));
  CHECK(p.tail_bound == 0.0);
  double len = 0;
  for (const auto& s : p.simplices) len += s.volume;
  CHECK(len == doctest::Approx(4.0));

  p = quad::plan(fixtures::half_line(), vec({0.5}), 1e-10);
  CHECK_FALSE(p.bounded);
  CHECK(std::isfinite(p.truncation));
  CHECK(p.tail_bound <= 1e-10);
  // True tail of e^{-x/2} beyond x = 2T is 2 e^{-T}.
  CHECK(2 * std::exp(-p.truncation) <= p.tail_bound);
  CHECK(p.integrate_exp() == doctest::Approx(2 * std::exp(1.0)).epsilon(1e-9));

  try {
    quad::plan(fixtures::half_line(), vec({-1}), 1e-10);
    FAIL("expected DivergentWeight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DivergentWeight);
    REQUIRE(e.witness().size() == 1);
    CHECK(e.witness()[0] > 0);
  }
  CHECK_FALSE(quad::divergence_witness(fixtures::quadrant(), vec({0.5, 0.5})).has_value());
  const auto w = quad::divergence_witness(fixtures::quadrant(), vec({0.5, -0.1}));
  REQUIRE(w.has_value());
  CHECK(vec({0.5, -0.1}).dot(*w) <= 0);
}

TEST_CASE("plans cover the truncated region") {
  std::mt19937_64 rng(2);
  struct Case {
    LabeledPolyhedron p;
    Eigen::VectorXd b;
  };
  std::vector<Case> cases{{fixtures::triangle(), vec({0.3, -0.2})},
                          {fixtures::quadrant(), vec({0.5, 0.5})},
                          {fixtures::strip(), vec({0.1, 0.5})},
                          {fixtures::octant(), vec({0.5, 0.4, 0.6})},
                          {fixtures::cube(), vec({0.1, 0.2, 0.3})}};
  for (const auto& c : cases) {
    const auto plan = quad::plan(c.p, c.b, 1e-8);
    std::uniform_real_distribution<double> u(-3, validate(c.p).proper && asymptotic_cone(c.p).is_zero() ? 6 : 30);
    // Volumes add up; sampled points of the truncated region lie in exactly one simplex.
    auto inside = [](const Simplex& s, const Eigen::VectorXd& x) {
      const int d = s.dim();
      Eigen::MatrixXd e(d, d);
      for (int k = 0; k < d; ++k) e.col(k) = s.vertices[k + 1] - s.vertices[0];
      const Eigen::VectorXd lam = e.fullPivLu().solve(x - s.vertices[0]);
      return lam.minCoeff() > 1e-9 && lam.sum() < 1 - 1e-9;
    };
    int checked = 0;
    for (int t = 0; t < 400; ++t) {
      Eigen::VectorXd x(c.p.dim());
      for (auto& v : x) v = u(rng);
      if (!c.p.interior_contains(x) || c.b.dot(x) >= plan.truncation - 1e-6) continue;
      int hits = 0;
      for (const auto& s : plan.simplices) hits += inside(s, x);
      CHECK(hits == 1);
      ++checked;
    }
    CHECK(checked > 5);
  }
}

TEST_CASE("plan integration is deterministic and matches closed forms") {
  const auto p1 = quad::plan(fixtures::quadrant(), vec({0.5, 0.5}), 1e-13);
  const auto p2 = quad::plan(fixtures::quadrant(), vec({0.5, 0.5}), 1e-13);
  CHECK(p1.integrate_exp() == p2.integrate_exp());
  const double e2 = 2 * std::exp(1.0);
  CHECK(p1.integrate_exp() == doctest::Approx(e2 * e2).epsilon(1e-11));
  const auto m = p1.integrate_moments();
  CHECK(std::abs(m.first[0]) < 1e-10);
  // ∫ x² e^{-x/2} over [-2, ∞) = 8 e; times the other factor 2e.
  CHECK(m.second(0, 0) == doctest::Approx(8 * std::exp(1.0) * e2).epsilon(1e-10));
}

TEST_CASE("tanh-sinh rule handles boundary singularities") {
  const auto plan = quad::plan(fixtures::interval(), vec({0.0}), 1e-12);
  // ∫_{-2}^{2} log(x + 2) dx = 4 log 4 - 4.
  const double v = quad::integrate(plan, [](const Eigen::VectorXd& x) { return std::log(x[0] + 2); }, 5);
  CHECK(v == doctest::Approx(4 * std::log(4.0) - 4).epsilon(1e-10));

  const auto sq = quad::plan(fixtures::square(), vec({0.0, 0.0}), 1e-12);
  const double w = quad::integrate(sq, [](const Eigen::VectorXd& x) { return x[0] * x[0] * std::exp(x[1]); }, 5);
  CHECK(w == doctest::Approx(16.0 / 3.0 * (std::exp(2.0) - std::exp(-2.0))).epsilon(1e-10));

  const auto many = quad::integrate_many(
      sq, [](const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> out) { out << 1.0, x[0] * x[0]; }, 2, 5);
  CHECK(many[0] == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(many[1] == doctest::Approx(64.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("tail estimate dominates the true tail") {
  // Half-line, b = 1/2: ∫_{x > 2T} |x|^k e^{-x/2} dx in closed form.
  for (double T : {5.0, 10.0, 20.0})
    for (int k = 0; k <= 2; ++k) {
      const double X = 2 * T;
      const double f = std::exp(-X / 2);
      const double truth = k == 0 ? 2 * f : k == 1 ? 2 * f * (X + 2) : 2 * f * (X * X + 4 * X + 8);
      const auto plan = quad::plan(fixtures::half_line(), vec({0.5}), 1e-10);
      CHECK(quad::tail_estimate(1, 0.5, plan.epsilon, plan.support_constant, T, k) >= truth);
    }
}

TEST_CASE("compensated sum") {
  quad::CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-10));
}

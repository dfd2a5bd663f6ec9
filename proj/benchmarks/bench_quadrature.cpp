#include <benchmark/benchmark.h>

#include <random>

#include "toric/quadrature.hpp"

using namespace toric;

static void BM_SimplexExp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Eigen::VectorXd> vs;
  for (int i = 0; i <= d; ++i) {
    Eigen::VectorXd v(d);
    for (auto& x : v) x = u(rng);
    vs.push_back(v);
  }
  const auto s = quad::Simplex::make(vs);
  Eigen::VectorXd b(d);
  for (auto& x : b) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(quad::exp_integral_simplex(s, b));
}
BENCHMARK(BM_SimplexExp)->Arg(1)->Arg(2)->Arg(3);

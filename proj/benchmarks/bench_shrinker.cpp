#include <benchmark/benchmark.h>

#include "toric/polyhedra.hpp"
#include "toric/shrinker.hpp"

using namespace toric;

namespace {

LabeledPolyhedron make(int dim, const std::vector<std::vector<std::int64_t>>& normals) {
  std::vector<Facet> fs;
  for (const auto& n : normals) {
    IntVector v(dim);
    for (int k = 0; k < dim; ++k) v[k] = n[static_cast<std::size_t>(k)];
    fs.push_back(Facet::from_raw(v, 1, exact::Rational(2)));
  }
  return LabeledPolyhedron(dim, fs);
}

const LabeledPolyhedron& triangle() {
  static const auto p = make(2, {{1, 0}, {0, 1}, {-1, -1}});
  return p;
}

const LabeledPolyhedron& quadrant() {
  static const auto p = make(2, {{1, 0}, {0, 1}});
  return p;
}

}  // namespace

static void BM_WeightedVolume(benchmark::State& state) {
  Eigen::VectorXd b(2);
  b << 0.3, -0.2;
  for (auto _ : state) benchmark::DoNotOptimize(grad_hess_F(triangle(), b));
}
BENCHMARK(BM_WeightedVolume);

static void BM_SolitonVectorTriangle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_soliton_vector(triangle()));
}
BENCHMARK(BM_SolitonVectorTriangle);

static void BM_SolitonVectorQuadrant(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_soliton_vector(quadrant()));
}
BENCHMARK(BM_SolitonVectorQuadrant);

static void BM_Solve1D(benchmark::State& state) {
  const auto p = std::make_shared<const LabeledPolyhedron>(make(1, {{1}, {-3}}));
  const auto sv = find_soliton_vector(*p);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, sv));
}
BENCHMARK(BM_Solve1D)->Unit(benchmark::kMillisecond);

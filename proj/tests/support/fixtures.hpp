#pragma once

#include <memory>
#include <string>
#include <vector>

#include "toric/polyhedra.hpp"
#include "toric/polyhedron_io.hpp"

namespace fixtures {

struct F {
  std::vector<std::int64_t> normal;
  std::int64_t label = 1;
  long long offset = 2;
};

inline toric::LabeledPolyhedron make(int dim, const std::vector<F>& facets) {
  std::vector<toric::Facet> out;
  for (const auto& f : facets) {
    toric::IntVector n(dim);
    for (int k = 0; k < dim; ++k) n[k] = f.normal[k];
    out.push_back(toric::Facet::from_raw(n, f.label, toric::exact::Rational(f.offset)));
  }
  return toric::LabeledPolyhedron(dim, std::move(out));
}

inline toric::LabeledPolyhedron interval() { return make(1, {{{1}}, {{-1}}}); }
inline toric::LabeledPolyhedron half_line() { return make(1, {{{1}}}); }
inline toric::LabeledPolyhedron teardrop(std::int64_t m = 3) { return make(1, {{{1}}, {{-1}, m}}); }
inline toric::LabeledPolyhedron square() { return make(2, {{{1, 0}}, {{-1, 0}}, {{0, 1}}, {{0, -1}}}); }
inline toric::LabeledPolyhedron quadrant() { return make(2, {{{1, 0}}, {{0, 1}}}); }
inline toric::LabeledPolyhedron strip() { return make(2, {{{1, 0}}, {{-1, 0}}, {{0, 1}}}); }
inline toric::LabeledPolyhedron triangle() { return make(2, {{{1, 0}}, {{0, 1}}, {{-1, -1}}}); }
inline toric::LabeledPolyhedron cube() {
  return make(3, {{{1, 0, 0}}, {{-1, 0, 0}}, {{0, 1, 0}}, {{0, -1, 0}}, {{0, 0, 1}}, {{0, 0, -1}}});
}
inline toric::LabeledPolyhedron octant() { return make(3, {{{1, 0, 0}}, {{0, 1, 0}}, {{0, 0, 1}}}); }
/// Labeled triangle with an orbifold corner.
inline toric::LabeledPolyhedron labeled_triangle() { return make(2, {{{1, 0}, 2}, {{0, 1}}, {{-1, -1}}}); }

inline std::shared_ptr<const toric::LabeledPolyhedron> shared(toric::LabeledPolyhedron p) {
  return std::make_shared<const toric::LabeledPolyhedron>(std::move(p));
}

inline std::string data_file(const std::string& name) { return std::string(TORIC_DATA_DIR) + "/" + name; }

}  // namespace fixtures

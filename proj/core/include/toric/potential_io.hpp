#pragma once

// JSON potential payload, shipped next to the polyhedron file:
//   { "canonical": 1,                       weight of u_P (true/false also accepted)
//     "terms": [ {"type": "affine", "constant": c, "slope": [...]},
//                {"type": "quadratic", "matrix": [[...]], "center": [...]},
//                {"type": "bump", "amplitude": a, "center": [...], "radius": [...]},
//                {"type": "facet_log", "facet": i, "coefficient": k} ],
//     "grids": [ {"weight": 1, "axes": [{"lo": l, "hi": h, "n": N}], "values": [...],
//                 "order": N-1, "extrapolate_low": [bool], "extrapolate_high": [bool], "anchor": [...], "b": [...],
//                 "c": v, "truncation": T} ] }
// Grid values are listed with the first axis slowest.

#include <filesystem>
#include <memory>

#include <json.hpp>

#include "toric/potentials.hpp"

namespace toric::io {

nlohmann::json potential_to_json(const SymplecticPotential& u);
/// Throws ParseError on malformed payloads.
SymplecticPotential potential_from_json(const nlohmann::json& j, std::shared_ptr<const LabeledPolyhedron> p);
SymplecticPotential load_potential(const std::filesystem::path& path, std::shared_ptr<const LabeledPolyhedron> p);

}  // namespace toric::io

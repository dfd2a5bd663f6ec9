#pragma once

// JSON polyhedron format:
//   { "dim": n, "facets": [ { "normal": [ints], "label": int, "offset": number | "p/q" } ] }
// Non-primitive normals are reduced and the multiplier folded into the label,
// which keeps the inequality <x, label·normal> + offset >= 0 unchanged.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "toric/polyhedra.hpp"

namespace toric::io {

/// Exact parse of "p/q", "k", or a JSON number (converted to its exact binary value).
exact::Rational parse_rational(const nlohmann::json& j, bool* exact_literal = nullptr);
nlohmann::json rational_to_json(const exact::Rational& q, bool exact_literal);

/// Throws ParseError on malformed input; polyhedron construction errors propagate.
LabeledPolyhedron polyhedron_from_json(const nlohmann::json& j);
nlohmann::json polyhedron_to_json(const LabeledPolyhedron& p);

LabeledPolyhedron load_polyhedron(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace toric::io

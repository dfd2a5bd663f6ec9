#include "toric/polyhedron_io.hpp"

#include <fstream>
#include <sstream>

#include "toric/error.hpp"

namespace toric::io {

using nlohmann::json;

exact::Rational parse_rational(const json& j, bool* exact_literal) {
  if (j.is_number_integer()) {
    if (exact_literal) *exact_literal = true;
    return exact::Rational(j.get<long long>());
  }
  if (j.is_number_float()) {
    if (exact_literal) *exact_literal = false;
    return exact::Rational(j.get<double>());
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      const auto slash = s.find('/');
      exact::Rational q;
      if (slash == std::string::npos) {
        q = exact::Rational(exact::Integer(s));
      } else {
        const exact::Integer num(s.substr(0, slash));
        const exact::Integer den(s.substr(slash + 1));
        if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
        q = exact::Rational(num, den);
      }
      if (exact_literal) *exact_literal = true;
      return q;
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "cannot parse rational '" + s + "'");
    }
  }
  throw Error(ErrorCode::ParseError, "expected a number or a \"p/q\" string");
}

json rational_to_json(const exact::Rational& q, bool exact_literal) {
  if (!exact_literal) return exact::to_double(q);
  if (denominator(q) == 1) {
    const auto& k = numerator(q);
    if (k <= std::numeric_limits<long long>::max() && k >= std::numeric_limits<long long>::min())
      return static_cast<long long>(k);
  }
  std::ostringstream os;
  os << numerator(q) << "/" << denominator(q);
  return os.str();
}

LabeledPolyhedron polyhedron_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("facets"))
    throw Error(ErrorCode::ParseError, "polyhedron needs \"dim\" and \"facets\"");
  if (!j["dim"].is_number_integer()) throw Error(ErrorCode::ParseError, "\"dim\" must be an integer");
  const int dim = j["dim"].get<int>();
  if (!j["facets"].is_array()) throw Error(ErrorCode::ParseError, "\"facets\" must be an array");
  std::vector<Facet> facets;
  for (const auto& f : j["facets"]) {
    if (!f.is_object() || !f.contains("normal") || !f.contains("offset"))
      throw Error(ErrorCode::ParseError, "facet needs \"normal\" and \"offset\"");
    const auto& nj = f["normal"];
    if (!nj.is_array() || static_cast<int>(nj.size()) != dim)
      throw Error(ErrorCode::ParseError, "facet normal must be an array of length dim");
    IntVector v(dim);
    for (int k = 0; k < dim; ++k) {
      if (!nj[k].is_number_integer()) throw Error(ErrorCode::ParseError, "facet normals must be integers");
      v(k) = nj[k].get<std::int64_t>();
    }
    std::int64_t label = 1;
    if (f.contains("label")) {
      if (!f["label"].is_number_integer() || f["label"].get<std::int64_t>() < 1)
        throw Error(ErrorCode::ParseError, "facet label must be a positive integer");
      label = f["label"].get<std::int64_t>();
    }
    bool exact_literal = true;
    auto offset = parse_rational(f["offset"], &exact_literal);
    facets.push_back(Facet::from_raw(v, label, std::move(offset), exact_literal));
  }
  return LabeledPolyhedron(dim, std::move(facets));
}

json polyhedron_to_json(const LabeledPolyhedron& p) {
  json facets = json::array();
  for (const auto& f : p.facets()) {
    json normal = json::array();
    for (Eigen::Index k = 0; k < f.normal.size(); ++k) normal.push_back(f.normal(k));
    facets.push_back({{"normal", normal}, {"label", f.label}, {"offset", rational_to_json(f.offset, f.exact_offset)}});
  }
  return {{"dim", p.dim()}, {"facets", facets}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

LabeledPolyhedron load_polyhedron(const std::filesystem::path& path) { return polyhedron_from_json(read_json_file(path)); }

}  // namespace toric::io

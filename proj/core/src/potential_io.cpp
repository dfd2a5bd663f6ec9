#include "toric/potential_io.hpp"

#include <cmath>

#include "toric/error.hpp"
#include "toric/polyhedron_io.hpp"

namespace toric::io {

using nlohmann::json;

namespace {

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string("\"") + what + "\" must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::ParseError, std::string("\"") + what + "\" must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

// JSON has no infinity; an unbounded truncation is written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json potential_to_json(const SymplecticPotential& u) {
  json out;
  out["canonical"] = u.canonical_weight();
  json terms = json::array();
  for (const auto& t : u.terms()) {
    json e;
    switch (t.kind) {
      case PotentialTerm::Kind::Affine:
        e = {{"type", "affine"}, {"constant", t.scalar}, {"slope", vec_json(t.vector)}};
        break;
      case PotentialTerm::Kind::Quadratic: {
        json m = json::array();
        for (Eigen::Index r = 0; r < t.matrix.rows(); ++r) m.push_back(vec_json(t.matrix.row(r).transpose()));
        e = {{"type", "quadratic"}, {"matrix", m}, {"center", vec_json(t.vector)}};
        break;
      }
      case PotentialTerm::Kind::Bump:
        e = {{"type", "bump"}, {"amplitude", t.scalar}, {"center", vec_json(t.vector)}, {"radius", vec_json(t.radius)}};
        break;
      case PotentialTerm::Kind::FacetLog:
        e = {{"type", "facet_log"}, {"facet", t.facet}, {"coefficient", t.scalar}};
        break;
    }
    terms.push_back(e);
  }
  out["terms"] = terms;
  json grids = json::array();
  for (const auto& [w, g] : u.grids()) {
    json axes = json::array();
    for (const auto& a : g->axes()) axes.push_back({{"lo", a.lo()}, {"hi", a.hi()}, {"n", a.size()}});
    json lo = json::array(), hi = json::array();
    for (bool b : g->extrapolate_low()) lo.push_back(b);
    for (bool b : g->extrapolate_high()) hi.push_back(b);
    grids.push_back({{"weight", w},
                     {"axes", axes},
                     {"values", vec_json(g->values())},
                     {"order", g->order()},
                     {"extrapolate_low", lo},
                     {"extrapolate_high", hi},
                     {"anchor", vec_json(g->anchor)},
                     {"b", vec_json(g->weight)},
                     {"c", g->constant},
                     {"truncation", finite_or_null(g->truncation)}});
  }
  out["grids"] = grids;
  return out;
}

SymplecticPotential potential_from_json(const json& j, std::shared_ptr<const LabeledPolyhedron> p) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "potential payload must be a JSON object");
  double canonical = 1.0;
  if (j.contains("canonical")) {
    const json& c = j.at("canonical");
    if (c.is_boolean())
      canonical = c.get<bool>() ? 1.0 : 0.0;
    else if (c.is_number())
      canonical = c.get<double>();
    else
      throw Error(ErrorCode::ParseError, "\"canonical\" must be a boolean or a number");
  }
  std::vector<PotentialTerm> terms;
  if (j.contains("terms")) {
    if (!j.at("terms").is_array()) throw Error(ErrorCode::ParseError, "\"terms\" must be an array");
    for (const auto& t : j.at("terms")) {
      const json& type = field(t, "type");
      if (!type.is_string()) throw Error(ErrorCode::ParseError, "term \"type\" must be a string");
      const std::string kind = type.get<std::string>();
      if (kind == "affine") {
        terms.push_back(PotentialTerm::affine(t.contains("constant") ? number(t, "constant") : 0.0,
                                              vec_from(field(t, "slope"), "slope")));
      } else if (kind == "quadratic") {
        const json& m = field(t, "matrix");
        if (!m.is_array()) throw Error(ErrorCode::ParseError, "\"matrix\" must be an array of rows");
        const Eigen::Index n = static_cast<Eigen::Index>(m.size());
        Eigen::MatrixXd q(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
          const Eigen::VectorXd row = vec_from(m[static_cast<std::size_t>(r)], "matrix");
          if (row.size() != n) throw Error(ErrorCode::ParseError, "\"matrix\" must be square");
          q.row(r) = row.transpose();
        }
        terms.push_back(PotentialTerm::quadratic(q, vec_from(field(t, "center"), "center")));
      } else if (kind == "bump") {
        terms.push_back(PotentialTerm::bump(number(t, "amplitude"), vec_from(field(t, "center"), "center"),
                                            vec_from(field(t, "radius"), "radius")));
      } else if (kind == "facet_log") {
        const json& f = field(t, "facet");
        if (!f.is_number_integer()) throw Error(ErrorCode::ParseError, "\"facet\" must be an integer");
        terms.push_back(PotentialTerm::facet_log(f.get<int>(), number(t, "coefficient")));
      } else {
        throw Error(ErrorCode::ParseError, "unknown term type '" + kind + "'");
      }
    }
  }
  std::vector<std::pair<double, std::shared_ptr<const GridCorrection>>> grids;
  if (j.contains("grids")) {
    if (!j.at("grids").is_array()) throw Error(ErrorCode::ParseError, "\"grids\" must be an array");
    for (const auto& g : j.at("grids")) {
      std::vector<cheb::Axis> axes;
      const json& ax = field(g, "axes");
      if (!ax.is_array()) throw Error(ErrorCode::ParseError, "\"axes\" must be an array");
      for (const auto& a : ax) {
        const json& n = field(a, "n");
        if (!n.is_number_integer()) throw Error(ErrorCode::ParseError, "axis \"n\" must be an integer");
        axes.emplace_back(n.get<int>(), number(a, "lo"), number(a, "hi"));
      }
      auto flags = [&](const char* key) {
        std::vector<bool> ext(axes.size(), false);
        if (!g.contains(key)) return ext;
        const json& e = g.at(key);
        if (!e.is_array() || e.size() != axes.size())
          throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" needs one flag per axis");
        for (std::size_t k = 0; k < e.size(); ++k) {
          if (!e[k].is_boolean()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" holds booleans");
          ext[k] = e[k].get<bool>();
        }
        return ext;
      };
      auto lo = flags("extrapolate_low");
      auto hi = flags("extrapolate_high");
      auto grid = std::make_shared<GridCorrection>(std::move(axes), vec_from(field(g, "values"), "values"),
                                                   std::move(lo), std::move(hi));
      if (g.contains("anchor")) grid->anchor = vec_from(g.at("anchor"), "anchor");
      if (g.contains("b")) grid->weight = vec_from(g.at("b"), "b");
      if (g.contains("c")) grid->constant = number(g, "c");
      if (g.contains("truncation") && g.at("truncation").is_number()) grid->truncation = number(g, "truncation");
      grids.emplace_back(g.contains("weight") ? number(g, "weight") : 1.0, std::move(grid));
    }
  }
  return SymplecticPotential(std::move(p), canonical, std::move(terms), std::move(grids));
}

SymplecticPotential load_potential(const std::filesystem::path& path, std::shared_ptr<const LabeledPolyhedron> p) {
  return potential_from_json(read_json_file(path), std::move(p));
}

}  // namespace toric::io

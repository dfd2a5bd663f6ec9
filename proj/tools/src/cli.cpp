#include "toric/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "toric/ding.hpp"
#include "toric/error.hpp"
#include "toric/potential_checks.hpp"
#include "toric/potential_io.hpp"
#include "toric/polyhedron_io.hpp"
#include "toric/shrinker.hpp"

namespace toric::cli {

using nlohmann::json;

namespace {

const std::pair<const char*, Command> kCommands[] = {
    {"validate", Command::Validate},       {"vertices", Command::Vertices},
    {"structure-group", Command::StructureGroup}, {"delzant", Command::Delzant},
    {"fan", Command::Fan},                 {"soliton-vector", Command::SolitonVector},
    {"residual", Command::Residual},       {"solve", Command::Solve},
    {"ding-scan", Command::DingScan},      {"check-potential", Command::CheckPotential},
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
      return kIoError;
    case ErrorCode::NoConvergence:
    case ErrorCode::NotConvexHere:
    case ErrorCode::DivergentD1:
      return kNoConvergence;
    default:
      return kValidationFailure;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const Eigen::VectorXd& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v(i));
  return s + ")";
}

std::string fmt(const IntVector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v(i));
  return s + ")";
}

std::string fmt(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const IntVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::ParseError, "failed writing " + path.string());
}

void write_json(const std::optional<std::filesystem::path>& path, const json& j) {
  if (path) write_file(*path, j.dump(2) + "\n");
}

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  std::ostream& err;
  std::shared_ptr<const LabeledPolyhedron> p;
};

int cmd_validate(Context& c) {
  const LabeledPolyhedron& p = *c.p;
  const ValidationReport r = validate(p);
  c.out << "polyhedron: dim " << p.dim() << ", " << p.num_facets() << " facets\n";
  json facets = json::array();
  for (std::size_t i = 0; i < p.num_facets(); ++i) {
    const Facet& f = p.facet(i);
    c.out << "facet " << i << ": normal " << fmt(f.normal) << " label " << f.label << " offset " << f.offset << "\n";
    facets.push_back({{"normal", to_json(f.normal)}, {"label", f.label}, {"offset", io::rational_to_json(f.offset, f.exact_offset)}});
  }
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  c.out << "proper: " << yn(r.proper) << "\nrational: " << yn(r.rational) << "\nsimple: " << yn(r.simple)
        << "\nshrinker-normalised: " << yn(p.shrinker_normalized()) << "\n";
  json j{{"proper", r.proper},
         {"rational", r.rational},
         {"simple", r.simple},
         {"labeled", r.labeled()},
         {"shrinker_normalized", p.shrinker_normalized()},
         {"facets", facets},
         {"vertex_count", r.vertices.size()}};
  if (r.line_witness) {
    c.out << "line in C(P): " << fmt(*r.line_witness) << "\n";
    j["line_witness"] = to_json(*r.line_witness);
  }
  if (r.irrational_witness) {
    c.out << "non-lattice edge: " << fmt(*r.irrational_witness) << "\n";
    j["irrational_witness"] = to_json(*r.irrational_witness);
  }
  if (!r.simple) {
    c.out << "not simple: " << r.nonsimple_reason << "\n";
    j["nonsimple_reason"] = r.nonsimple_reason;
  }
  write_json(c.cfg.output, j);
  if (!r.labeled()) {
    c.err << "error: validation failed: polyhedron is not proper, rational and simple\n";
    return kValidationFailure;
  }
  return kOk;
}

int cmd_vertices(Context& c) {
  const auto vs = vertices(*c.p);
  json arr = json::array();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& v = vs[i];
    c.out << "vertex " << i << ": " << fmt(v.point) << " facets " << fmt(v.active_facets) << " edges";
    json edges = json::array();
    for (const auto& e : v.edge_generators) {
      c.out << " " << fmt(e);
      edges.push_back(to_json(e));
    }
    c.out << "\n";
    arr.push_back({{"point", to_json(v.point)}, {"facets", v.active_facets}, {"edges", edges}});
  }
  write_json(c.cfg.output, json{{"vertices", arr}});
  return kOk;
}

int cmd_structure_group(Context& c) {
  const LabeledPolyhedron& p = *c.p;
  require_labeled(p);
  json arr = json::array();
  auto report = [&](const std::string& what, const std::vector<int>& face) {
    const auto g = structure_group(p, face);
    c.out << what << " " << fmt(face) << ": " << g.to_string() << "\n";
    arr.push_back({{"face", face}, {"group", g.to_string()}, {"order", g.order()}, {"invariant_factors", g.invariant_factors}});
  };
  if (!c.cfg.face.empty()) {
    report("face", c.cfg.face);
  } else {
    for (std::size_t i = 0; i < p.num_facets(); ++i) report("facet", {static_cast<int>(i)});
    for (const auto& v : vertices(p))
      if (v.active_facets.size() > 1) report("vertex", v.active_facets);
  }
  write_json(c.cfg.output, json{{"structure_groups", arr}});
  return kOk;
}

int cmd_delzant(Context& c) {
  require_labeled(*c.p);
  const DelzantData d = delzant_data(*c.p);
  json proj = json::array(), ker = json::array();
  c.out << "projection (row i = m_i n_i):\n";
  for (Eigen::Index i = 0; i < d.projection.rows(); ++i) {
    const IntVector row = d.projection.row(i).transpose();
    c.out << "  " << fmt(row) << "\n";
    proj.push_back(to_json(row));
  }
  c.out << "kernel basis:\n";
  for (Eigen::Index j = 0; j < d.kernel.cols(); ++j) {
    const IntVector col = d.kernel.col(j);
    c.out << "  " << fmt(col) << "\n";
    ker.push_back(to_json(col));
  }
  c.out << "offsets: " << fmt(d.offsets) << "\n";
  write_json(c.cfg.output, json{{"projection", proj}, {"kernel", ker}, {"offsets", to_json(d.offsets)}});
  return kOk;
}

int cmd_fan(Context& c) {
  const auto fan = normal_fan(*c.p);
  json arr = json::array();
  for (const auto& fc : fan) {
    c.out << "face " << fmt(fc.face) << ": rays";
    json rays = json::array();
    for (const auto& r : fc.cone.rays()) {
      c.out << " " << fmt(r);
      rays.push_back(to_json(r));
    }
    c.out << "\n";
    arr.push_back({{"face", fc.face}, {"rays", rays}});
  }
  write_json(c.cfg.output, json{{"cones", arr}});
  return kOk;
}

SolitonVector soliton(const Context& c) { return find_soliton_vector(*c.p, c.cfg.tolerance.value_or(1e-12)); }

int cmd_soliton_vector(Context& c) {
  const SolitonVector sv = soliton(c);
  c.out << "b = " << fmt(sv.b) << "\nF(b) = " << fmt(sv.F_value) << "\n|grad F| = " << fmt(sv.gradient_norm)
        << "\n";
  write_json(c.cfg.output, json{{"b", to_json(sv.b)}, {"F", sv.F_value}, {"grad_norm", sv.gradient_norm}});
  return kOk;
}

SymplecticPotential load_or_canonical(const Context& c, const std::optional<std::filesystem::path>& path) {
  if (path) return io::load_potential(*path, c.p);
  return guillemin_potential(c.p);
}

// Weight recorded by the solver, otherwise the soliton vector of P.
Eigen::VectorXd weight_for(const Context& c, const SymplecticPotential& u) {
  for (const auto& [w, g] : u.grids())
    if (g->weight.size() == c.p->dim()) return g->weight;
  return soliton(c).b;
}

int cmd_residual(Context& c) {
  const SymplecticPotential u = load_or_canonical(c, c.cfg.potential);
  const Eigen::VectorXd b = weight_for(c, u);
  auto pts = sample_interior(*c.p, 200, c.cfg.seed);
  for (const auto& [w, g] : u.grids()) {
    const auto& axes = g->axes();
    if (axes.size() == 1) {
      for (int i = 0; i < axes[0].size(); ++i) pts.push_back(Eigen::VectorXd::Constant(1, axes[0].nodes()(i)));
    } else {
      for (int i = 0; i < axes[0].size(); ++i)
        for (int j = 0; j < axes[1].size(); ++j) pts.push_back(Eigen::Vector2d(axes[0].nodes()(i), axes[1].nodes()(j)));
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& x : pts) {
    const double r = residual(u, b, x);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double constant = 0.5 * (lo + hi), deviation = 0.5 * (hi - lo);
  c.out << "b = " << fmt(b) << "\nsamples: " << pts.size() << "\nresidual constant: " << fmt(constant)
        << "\nresidual deviation: " << fmt(deviation) << "\n";
  write_json(c.cfg.output,
             json{{"b", to_json(b)}, {"constant", constant}, {"deviation", deviation}, {"samples", pts.size()}});
  return kOk;
}

int cmd_solve(Context& c) {
  const SolitonVector sv = soliton(c);
  GridSpec spec;
  spec.nodes = c.cfg.grid > 0 ? c.cfg.grid : (c.p->dim() == 1 ? 32 : 20);
  spec.truncation = c.cfg.truncation;
  const SolveResult r = solve(c.p, sv, spec, c.cfg.tolerance.value_or(1e-9));
  c.out << "b = " << fmt(sv.b) << "\niterations: " << r.iterations << "\nresidual constant: "
        << fmt(r.residual_constant) << "\nresidual deviation: " << fmt(r.residual_deviation)
        << "\nanchor: " << fmt(r.anchor) << "\n";
  if (!r.boundary_condition.empty()) c.out << "truncation: " << r.boundary_condition << "\n";
  if (c.cfg.output) {
    json j = io::potential_to_json(r.potential);
    j["residual_constant"] = r.residual_constant;
    j["residual_deviation"] = r.residual_deviation;
    j["iterations"] = r.iterations;
    write_json(c.cfg.output, j);

    const auto& grid = *r.potential.grids().front().second;
    const auto& axes = grid.axes();
    std::string csv;
    csv += axes.size() == 1 ? "x0,s,residual\n" : "x0,x1,s,residual\n";
    char buf[128];
    auto row = [&](const Eigen::VectorXd& x) {
      const double s = grid.jet(x).value;
      const double res = residual(r.potential, sv.b, x);
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,", x(k));
        csv += buf;
      }
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s, res);
      csv += buf;
    };
    if (axes.size() == 1) {
      for (int i = 0; i < axes[0].size(); ++i) row(Eigen::VectorXd::Constant(1, axes[0].nodes()(i)));
    } else {
      for (int i = 0; i < axes[0].size(); ++i)
        for (int j = 0; j < axes[1].size(); ++j) row(Eigen::Vector2d(axes[0].nodes()(i), axes[1].nodes()(j)));
    }
    std::filesystem::path csv_path = *c.cfg.output;
    csv_path.replace_extension(".csv");
    write_file(csv_path, csv);
  }
  return kOk;
}

int cmd_ding_scan(Context& c) {
  const SymplecticPotential v0 = load_or_canonical(c, c.cfg.potential);
  SymplecticPotential v1 = v0;
  if (c.cfg.target) {
    v1 = io::load_potential(*c.cfg.target, c.p);
  } else {
    Eigen::VectorXd tilt = Eigen::VectorXd::Zero(c.p->dim());
    tilt(0) = 0.3;
    v1 = v0.plus(PotentialTerm::affine(0.0, tilt));
  }
  const Eigen::VectorXd b = weight_for(c, v0);
  if (c.cfg.samples < 3) throw Error(ErrorCode::InvalidArgument, "ding-scan needs --samples >= 3");
  const auto scan = convexity_scan(v0, v1, *c.p, b, c.cfg.samples);
  const ScanAnalysis a = analyze_scan(scan, v0, v1, *c.p, c.cfg.seed);
  c.out << "b = " << fmt(b) << "\n";
  for (const auto& d : scan) c.out << "t = " << fmt(d.t) << "  D1 = " << fmt(d.D1) << "  D = " << fmt(d.D) << "\n";
  c.out << "min second difference: " << fmt(a.min_second_difference) << "\nspread of D: " << fmt(a.spread)
        << "\naffine-fit residual of v1 - v0: " << fmt(a.affine_fit_residual) << "\n";
  if (c.cfg.output) write_file(*c.cfg.output, ding_csv(scan));
  return kOk;
}

int cmd_check_potential(Context& c) {
  const SymplecticPotential u = load_or_canonical(c, c.cfg.potential);
  Eigen::VectorXd b;
  try {
    b = weight_for(c, u);
  } catch (const Error&) {
    b = Eigen::VectorXd::Zero(c.p->dim());
  }
  const EReport e = check_space_E(u, *c.p, b, c.cfg.seed);
  c.out << "boundary: " << e.boundary.summary() << "\nspace E: " << e.summary() << "\n";
  json reasons = json::array();
  for (const auto& r : e.reasons) reasons.push_back(r);
  write_json(c.cfg.output, json{{"boundary_smooth", e.boundary.correction_smooth},
                                {"boundary_det_positive", e.boundary.det_positive},
                                {"convex", e.convex},
                                {"correction_smooth", e.correction_smooth},
                                {"gradient_surjective", e.gradient_surjective},
                                {"surjectivity_directional", e.surjectivity_is_directional},
                                {"integrable", e.integrable},
                                {"weighted_l1", e.weighted_l1},
                                {"reasons", reasons}});
  if (!e.passed() || !e.boundary.passed()) {
    c.err << "error: potential check failed\n";
    return kValidationFailure;
  }
  return kOk;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& [n, c] : kCommands)
    if (name == n) return c;
  return std::nullopt;
}

std::string command_name(Command c) {
  for (const auto& [n, k] : kCommands)
    if (k == c) return n;
  return "unknown";
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.tolerance && !(*cfg.tolerance > 0)) throw Error(ErrorCode::InvalidArgument, "--tol must be positive");
    if (!(cfg.truncation > 0)) throw Error(ErrorCode::InvalidArgument, "--truncation must be positive");
    if (cfg.grid < 0) throw Error(ErrorCode::InvalidArgument, "--grid must be positive");

    const json input = io::read_json_file(cfg.input);
    Context c{cfg, out, err, std::make_shared<const LabeledPolyhedron>(io::polyhedron_from_json(input))};
    if (!c.p->shrinker_normalized()) {
      err << "warning: offsets are not all 2 (not shrinker-normalised)\n";
      if (!cfg.allow_general_offsets) {
        err << "error: InvalidArgument: general offsets rejected; pass --allow-general-offsets\n";
        return kValidationFailure;
      }
    }
    switch (cfg.command) {
      case Command::Validate: return cmd_validate(c);
      case Command::Vertices: return cmd_vertices(c);
      case Command::StructureGroup: return cmd_structure_group(c);
      case Command::Delzant: return cmd_delzant(c);
      case Command::Fan: return cmd_fan(c);
      case Command::SolitonVector: return cmd_soliton_vector(c);
      case Command::Residual: return cmd_residual(c);
      case Command::Solve: return cmd_solve(c);
      case Command::DingScan: return cmd_ding_scan(c);
      case Command::CheckPotential: return cmd_check_potential(c);
    }
    return kValidationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: IoError: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace toric::cli

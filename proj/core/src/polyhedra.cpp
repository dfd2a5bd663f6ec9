#include "toric/polyhedra.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "toric/error.hpp"

namespace toric {

using exact::Rational;
using exact::RatMatrix;
using exact::RatVector;

namespace {

RatVector to_rat(const IntVector& v) {
  RatVector r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r[i] = Rational(v(i));
  return r;
}

Eigen::VectorXd to_double(const RatVector& v) {
  Eigen::VectorXd d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d(i) = exact::to_double(v[i]);
  return d;
}

IntVector to_int(const RatVector& v) {
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = exact::to_int64(v[i]);
  return out;
}

// Exact slack L_i(x) = <m_i n_i, x> + a_i.
Rational slack(const Facet& f, const RatVector& x) {
  const IntVector mn = f.scaled_normal();
  Rational s = f.offset;
  for (Eigen::Index k = 0; k < mn.size(); ++k) s += Rational(mn(k)) * x[k];
  return s;
}

template <typename F>
void for_each_subset(int n, int k, F&& f) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Vertex candidates from every n-subset of facets, exact.
std::vector<RatVector> enumerate_vertices(const LabeledPolyhedron& p) {
  const int n = p.dim();
  const int N = static_cast<int>(p.num_facets());
  std::vector<RatVector> out;
  for_each_subset(N, n, [&](const std::vector<int>& subset) {
    RatMatrix a;
    RatVector rhs;
    for (int i : subset) {
      a.push_back(to_rat(p.facet(i).scaled_normal()));
      rhs.push_back(-p.facet(i).offset);
    }
    auto x = exact::solve(a, rhs);
    if (!x) return;
    for (const auto& f : p.facets())
      if (slack(f, *x) < 0) return;
    if (std::find(out.begin(), out.end(), *x) == out.end()) out.push_back(std::move(*x));
  });
  std::sort(out.begin(), out.end());
  return out;
}

VertexData make_vertex(const LabeledPolyhedron& p, RatVector x) {
  VertexData v;
  v.point = to_double(x);
  RatMatrix tangent;
  for (std::size_t i = 0; i < p.num_facets(); ++i) {
    if (slack(p.facet(i), x) == 0) {
      v.active_facets.push_back(static_cast<int>(i));
      tangent.push_back(to_rat(p.facet(i).scaled_normal()));
    }
  }
  const auto edges = exact::cone_generators(tangent, p.dim());
  for (const auto& e : edges.rays) v.edge_generators.push_back(to_int(e));
  v.exact_point = std::move(x);
  return v;
}

// Lawson–Hanson nonnegative least squares: min |M z - y|, z >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& M, const Eigen::VectorXd& y) {
  const Eigen::Index n = M.cols();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-13 * std::max(1.0, M.cwiseAbs().maxCoeff()) * std::max(1.0, y.norm());
  for (int outer = 0; outer < 3 * static_cast<int>(n) + 10; ++outer) {
    Eigen::VectorXd w = M.transpose() * (y - M * z);
    Eigen::Index j = -1;
    double best = tol;
    for (Eigen::Index k = 0; k < n; ++k)
      if (!passive[k] && w(k) > best) {
        best = w(k);
        j = k;
      }
    if (j < 0) break;
    passive[j] = true;
    for (int inner = 0; inner < 3 * static_cast<int>(n) + 10; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index k = 0; k < n; ++k)
        if (passive[k]) idx.push_back(k);
      Eigen::MatrixXd Mp(M.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) Mp.col(static_cast<Eigen::Index>(c)) = M.col(idx[c]);
      const Eigen::VectorXd sp = Mp.colPivHouseholderQr().solve(y);
      Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
      for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = sp(static_cast<Eigen::Index>(c));
      bool positive = true;
      for (auto k : idx)
        if (s(k) <= 0) positive = false;
      if (positive) {
        z = s;
        break;
      }
      double alpha = 1.0;
      for (auto k : idx)
        if (s(k) <= 0) alpha = std::min(alpha, z(k) / (z(k) - s(k)));
      z += alpha * (s - z);
      for (auto k : idx)
        if (z(k) <= 1e-15) {
          passive[k] = false;
          z(k) = 0.0;
        }
    }
  }
  return z;
}

std::string vec_str(const IntVector& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ")";
  return os.str();
}

}  // namespace

IntVector Facet::scaled_normal() const {
  IntVector out(normal.size());
  for (Eigen::Index i = 0; i < normal.size(); ++i) out(i) = lattice::checked_mul(label, normal(i));
  return out;
}

Facet Facet::from_raw(const IntVector& v, std::int64_t label, Rational offset, bool exact_offset) {
  if (label < 1) throw Error(ErrorCode::InvalidArgument, "facet label must be a positive integer");
  auto red = lattice::primitive_reduce(v);
  return Facet{red.primitive, lattice::checked_mul(label, red.multiplier), std::move(offset), exact_offset};
}

LabeledPolyhedron::LabeledPolyhedron(int dim, std::vector<Facet> facets) : dim_(dim), facets_(std::move(facets)) {
  if (dim_ < 1 || dim_ > 3)
    throw Error(ErrorCode::UnsupportedDimension, "polyhedra are supported in dimensions 1..3");
  if (facets_.empty()) throw Error(ErrorCode::InvalidArgument, "a polyhedron needs at least one facet");
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    const Facet& f = facets_[i];
    if (f.normal.size() != dim_) throw Error(ErrorCode::InvalidArgument, "facet normal has wrong length");
    if (f.label < 1) throw Error(ErrorCode::InvalidArgument, "facet label must be a positive integer");
    const auto red = lattice::primitive_reduce(f.normal);
    if (red.multiplier != 1)
      throw Error(ErrorCode::InvalidArgument, "facet normal " + vec_str(f.normal) + " is not primitive");
  }
  for (std::size_t i = 0; i < facets_.size(); ++i)
    for (std::size_t j = i + 1; j < facets_.size(); ++j)
      if (facets_[i].normal == facets_[j].normal &&
          facets_[i].offset / facets_[i].label == facets_[j].offset / facets_[j].label) {
        std::ostringstream os;
        os << "facets " << i << " and " << j << " define the same hyperplane";
        throw Error(ErrorCode::RedundantFacet, os.str());
      }

  A_.resize(static_cast<Eigen::Index>(facets_.size()), dim_);
  a_.resize(static_cast<Eigen::Index>(facets_.size()));
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    A_.row(static_cast<Eigen::Index>(i)) = facets_[i].scaled_normal().cast<double>().transpose();
    a_(static_cast<Eigen::Index>(i)) = facets_[i].offset_value();
  }

  // Homogenisation K = {(x, τ) : <m_i n_i, x> + a_i τ >= 0, τ >= 0}.
  RatMatrix h;
  for (const auto& f : facets_) {
    RatVector row = to_rat(f.scaled_normal());
    row.push_back(f.offset);
    h.push_back(std::move(row));
  }
  RatVector tau(dim_ + 1, Rational(0));
  tau[dim_] = 1;
  h.push_back(tau);
  const auto k = exact::cone_generators(h, dim_ + 1);
  for (const auto& r : k.rays) {
    const Rational t = r[dim_];
    RatVector x(r.begin(), r.end() - 1);
    if (t > 0) {
      for (auto& q : x) q /= t;
      gens_.points.push_back(std::move(x));
    } else {
      gens_.rays.push_back(std::move(x));
    }
  }
  for (const auto& l : k.lines) gens_.lines.emplace_back(l.begin(), l.end() - 1);
  if (gens_.points.empty()) throw Error(ErrorCode::EmptyPolyhedron, "the facet inequalities are infeasible");

  auto homog = [&](auto pred) {
    RatMatrix rows;
    for (const auto& pt : gens_.points)
      if (pred(pt, true)) {
        RatVector r = pt;
        r.push_back(1);
        rows.push_back(std::move(r));
      }
    for (const auto& ry : gens_.rays)
      if (pred(ry, false)) {
        RatVector r = ry;
        r.push_back(0);
        rows.push_back(std::move(r));
      }
    for (const auto& ln : gens_.lines) {
      RatVector r = ln;
      r.push_back(0);
      rows.push_back(std::move(r));
    }
    return exact::rank(rows, dim_ + 1);
  };
  if (homog([](const RatVector&, bool) { return true; }) != dim_ + 1)
    throw Error(ErrorCode::EmptyInterior, "the polyhedron is not full-dimensional");
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    const IntVector mn = facets_[i].scaled_normal();
    const RatVector mnr = to_rat(mn);
    const int r = homog([&](const RatVector& g, bool is_point) {
      return is_point ? slack(facets_[i], g) == 0 : exact::dot(mnr, g) == 0;
    });
    if (r != dim_) {
      std::ostringstream os;
      os << "facet " << i << " touches P in a face of dimension " << (r - 1) << " < " << (dim_ - 1);
      throw Error(ErrorCode::RedundantFacet, os.str());
    }
  }
}

bool LabeledPolyhedron::contains(const Eigen::VectorXd& x, double tol) const {
  return (slacks(x).array() >= -tol).all();
}

bool LabeledPolyhedron::interior_contains(const Eigen::VectorXd& x) const { return (slacks(x).array() > 0).all(); }

bool LabeledPolyhedron::shrinker_normalized() const {
  return std::all_of(facets_.begin(), facets_.end(), [](const Facet& f) { return f.offset == 2; });
}

Eigen::VectorXd LabeledPolyhedron::interior_point() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
  for (const auto& p : gens_.points) c += to_double(p);
  c /= static_cast<double>(gens_.points.size());
  for (const auto& r : gens_.rays) {
    const Eigen::VectorXd d = to_double(r);
    c += d / d.norm();
  }
  return c;
}

LabeledPolyhedron LabeledPolyhedron::translated(const Eigen::VectorXd& c) const {
  std::vector<Facet> fs = facets_;
  for (auto& f : fs) {
    const IntVector mn = f.scaled_normal();
    for (Eigen::Index k = 0; k < mn.size(); ++k) f.offset -= Rational(mn(k)) * Rational(c(k));
  }
  return LabeledPolyhedron(dim_, std::move(fs));
}

LabeledPolyhedron product(const LabeledPolyhedron& p1, const LabeledPolyhedron& p2) {
  const int n1 = p1.dim(), n2 = p2.dim();
  std::vector<Facet> fs;
  for (const auto& f : p1.facets()) {
    Facet g = f;
    g.normal = IntVector::Zero(n1 + n2);
    g.normal.head(n1) = f.normal;
    fs.push_back(std::move(g));
  }
  for (const auto& f : p2.facets()) {
    Facet g = f;
    g.normal = IntVector::Zero(n1 + n2);
    g.normal.tail(n2) = f.normal;
    fs.push_back(std::move(g));
  }
  return LabeledPolyhedron(n1 + n2, std::move(fs));
}

std::optional<std::pair<LabeledPolyhedron, LabeledPolyhedron>> split_product(const LabeledPolyhedron& p,
                                                                             int first_dim) {
  const int n = p.dim();
  if (first_dim < 1 || first_dim >= n) return std::nullopt;
  std::vector<Facet> f1, f2;
  for (const auto& f : p.facets()) {
    const bool head = f.normal.tail(n - first_dim).isZero();
    const bool tail = f.normal.head(first_dim).isZero();
    if (head) {
      Facet g = f;
      g.normal = f.normal.head(first_dim);
      f1.push_back(std::move(g));
    } else if (tail) {
      Facet g = f;
      g.normal = f.normal.tail(n - first_dim);
      f2.push_back(std::move(g));
    } else {
      return std::nullopt;
    }
  }
  if (f1.empty() || f2.empty()) return std::nullopt;
  return std::make_pair(LabeledPolyhedron(first_dim, std::move(f1)), LabeledPolyhedron(n - first_dim, std::move(f2)));
}

ValidationReport validate(const LabeledPolyhedron& p) {
  ValidationReport rep;
  const int n = p.dim();

  // Proper iff C(P) contains no line iff the normals have rank n.
  RatMatrix normals;
  for (const auto& f : p.facets()) normals.push_back(to_rat(f.normal));
  const auto line = exact::kernel(normals, n);
  rep.proper = line.empty();
  if (!rep.proper) rep.line_witness = to_int(exact::primitive_direction(line.front()));

  for (auto& x : enumerate_vertices(p)) rep.vertices.push_back(make_vertex(p, std::move(x)));

  // Edge generators are solutions of integer systems, hence rational; scaled to
  // primitive lattice vectors they certify rationality of every vertex cone.
  rep.rational = true;
  for (const auto& v : rep.vertices)
    for (const auto& e : v.edge_generators)
      if (lattice::primitive_reduce(e).multiplier != 1) {
        rep.rational = false;
        rep.irrational_witness = e;
      }

  rep.simple = !rep.vertices.empty();
  if (rep.vertices.empty()) rep.nonsimple_reason = "polyhedron has no vertices";
  for (std::size_t i = 0; i < rep.vertices.size() && rep.simple; ++i) {
    const auto& v = rep.vertices[i];
    std::ostringstream os;
    if (static_cast<int>(v.edge_generators.size()) != n) {
      os << "vertex " << i << " has " << v.edge_generators.size() << " edges, expected " << n;
    } else {
      RatMatrix e;
      for (const auto& g : v.edge_generators) e.push_back(to_rat(g));
      if (exact::rank(e, n) != n) os << "edge generators at vertex " << i << " are linearly dependent";
    }
    if (!os.str().empty()) {
      rep.simple = false;
      rep.nonsimple_vertex = i;
      rep.nonsimple_reason = os.str();
    }
  }
  return rep;
}

void require_labeled(const LabeledPolyhedron& p) {
  const auto rep = validate(p);
  if (!rep.proper) throw Error(ErrorCode::NotProper, "asymptotic cone contains a line " + vec_str(*rep.line_witness));
  if (!rep.simple) throw Error(ErrorCode::NotSimple, rep.nonsimple_reason);
}

std::vector<VertexData> vertices(const LabeledPolyhedron& p) {
  auto rep = validate(p);
  if (!rep.simple && !rep.vertices.empty()) throw Error(ErrorCode::NotSimple, rep.nonsimple_reason);
  return std::move(rep.vertices);
}

Cone asymptotic_cone(const LabeledPolyhedron& p) {
  std::vector<IntVector> normals;
  for (const auto& f : p.facets()) normals.push_back(f.normal);
  return Cone::from_halfspaces(p.dim(), std::move(normals));
}

MinkowskiDecomposition::PointSplit MinkowskiDecomposition::split(const Eigen::VectorXd& x) const {
  const Eigen::Index n = x.size();
  const auto nv = static_cast<Eigen::Index>(vertices.size());
  const auto nr = static_cast<Eigen::Index>(recession.rays().size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, nv + nr);
  for (Eigen::Index i = 0; i < nv; ++i) {
    M.col(i).head(n) = vertices[static_cast<std::size_t>(i)];
    M(n, i) = 1.0;
  }
  for (Eigen::Index j = 0; j < nr; ++j) {
    const Eigen::VectorXd r = recession.rays()[static_cast<std::size_t>(j)].cast<double>();
    M.col(nv + j).head(n) = r / r.norm();
  }
  Eigen::VectorXd y(n + 1);
  y.head(n) = x;
  y(n) = 1.0;
  const Eigen::VectorXd z = nnls(M, y);

  PointSplit s;
  s.lambda = z.head(nv);
  s.mu = z.tail(nr);
  s.hull_point = M.topLeftCorner(n, nv) * s.lambda;
  s.cone_point = M.topRightCorner(n, nr) * s.mu;
  s.error = (M * z - y).norm();
  return s;
}

MinkowskiDecomposition minkowski_decompose(const LabeledPolyhedron& p) {
  const auto rep = validate(p);
  if (!rep.proper) throw Error(ErrorCode::NotProper, "asymptotic cone contains a line " + vec_str(*rep.line_witness));
  if (!rep.simple) throw Error(ErrorCode::NotSimple, rep.nonsimple_reason);
  MinkowskiDecomposition d{{}, asymptotic_cone(p)};
  for (const auto& v : rep.vertices) d.vertices.push_back(v.point);
  return d;
}

lattice::AbelianGroup structure_group(const LabeledPolyhedron& p, const std::vector<int>& face) {
  const int n = p.dim();
  for (int i : face)
    if (i < 0 || static_cast<std::size_t>(i) >= p.num_facets())
      throw Error(ErrorCode::InvalidArgument, "facet index out of range");
  if (face.empty()) return {};

  const bool nonempty = std::any_of(p.generators().points.begin(), p.generators().points.end(),
                                    [&](const RatVector& x) {
                                      return std::all_of(face.begin(), face.end(),
                                                         [&](int i) { return slack(p.facet(i), x) == 0; });
                                    });
  if (!nonempty) throw Error(ErrorCode::EmptyFace, "selected facets have no common point in P");

  IntMatrix normals(n, static_cast<Eigen::Index>(face.size()));
  for (std::size_t c = 0; c < face.size(); ++c) normals.col(static_cast<Eigen::Index>(c)) = p.facet(face[c]).normal;
  const IntMatrix basis = lattice::saturation_basis(normals);  // n x r
  const auto r = basis.cols();

  // Coordinates of m_i n_i in the saturated basis (exact, must be integral).
  RatMatrix btb(r, RatVector(r, Rational(0)));
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index k = 0; k < n; ++k) btb[i][j] += Rational(basis(k, i)) * Rational(basis(k, j));
  IntMatrix gens(static_cast<Eigen::Index>(face.size()), r);
  for (std::size_t c = 0; c < face.size(); ++c) {
    const IntVector mn = p.facet(face[c]).scaled_normal();
    RatVector rhs(r, Rational(0));
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index k = 0; k < n; ++k) rhs[i] += Rational(basis(k, i)) * Rational(mn(k));
    const auto coords = exact::solve(btb, rhs);
    for (Eigen::Index i = 0; i < r; ++i) gens(static_cast<Eigen::Index>(c), i) = exact::to_int64((*coords)[i]);
  }
  return lattice::quotient_group(gens, static_cast<int>(r));
}

DelzantData delzant_data(const LabeledPolyhedron& p) {
  require_labeled(p);
  const auto N = static_cast<Eigen::Index>(p.num_facets());
  DelzantData d;
  d.projection.resize(N, p.dim());
  for (Eigen::Index i = 0; i < N; ++i) d.projection.row(i) = p.facet(i).scaled_normal().transpose();
  const IntMatrix varpi = d.projection.transpose();
  const auto snf = lattice::smith_normal_form(varpi);
  if (snf.rank < p.dim()) throw Error(ErrorCode::DegenerateProjection, "rank of the projection is below n");
  d.kernel = lattice::integer_kernel(varpi);
  d.offsets = p.a();
  return d;
}

std::vector<FanCone> normal_fan(const LabeledPolyhedron& p) {
  const auto verts = vertices(p);
  require_labeled(p);
  std::set<std::vector<int>> faces;
  for (const auto& v : verts) {
    const int k = static_cast<int>(v.active_facets.size());
    for (int size = 0; size <= k; ++size)
      for_each_subset(k, size, [&](const std::vector<int>& sub) {
        std::vector<int> f;
        for (int i : sub) f.push_back(v.active_facets[i]);
        faces.insert(std::move(f));
      });
  }
  std::vector<std::vector<int>> ordered(faces.begin(), faces.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<FanCone> fan;
  for (auto& f : ordered) {
    std::vector<IntVector> gens;
    for (int i : f) gens.push_back(p.facet(i).normal);
    fan.push_back({f, Cone::from_generators(p.dim(), std::move(gens))});
  }
  return fan;
}

}  // namespace toric

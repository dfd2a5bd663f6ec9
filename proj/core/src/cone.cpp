#include "toric/cone.hpp"

#include <algorithm>

#include "toric/error.hpp"
#include "toric/exact.hpp"

namespace toric {

namespace {

exact::RatMatrix to_rational(const std::vector<IntVector>& rows) {
  exact::RatMatrix m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    exact::RatVector v(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) v[i] = exact::Rational(r(i));
    m.push_back(std::move(v));
  }
  return m;
}

IntVector to_int(const exact::RatVector& v) {
  const auto p = exact::primitive_direction(v);
  IntVector out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out(i) = exact::to_int64(p[i]);
  return out;
}

void check_dims(int dim, const std::vector<IntVector>& vs) {
  for (const auto& v : vs)
    if (v.size() != dim) throw Error(ErrorCode::InvalidArgument, "cone vector has wrong length");
}

}  // namespace

Cone Cone::from_halfspaces(int dim, std::vector<IntVector> normals) {
  check_dims(dim, normals);
  Cone c;
  c.dim_ = dim;
  c.form_ = Form::Halfspace;
  const auto gens = exact::cone_generators(to_rational(normals), dim);
  for (const auto& r : gens.rays) c.rays_.push_back(to_int(r));
  for (const auto& l : gens.lines) c.lines_.push_back(to_int(l));
  c.halfspaces_ = std::move(normals);
  return c;
}

Cone Cone::from_generators(int dim, std::vector<IntVector> rays, std::vector<IntVector> lines) {
  check_dims(dim, rays);
  check_dims(dim, lines);
  // Facets of cone(G) are the generators of the dual {h : <h, g> >= 0}.
  std::vector<IntVector> dual_rows = rays;
  for (const auto& l : lines) {
    dual_rows.push_back(l);
    dual_rows.push_back(-l);
  }
  const auto facets = exact::cone_generators(to_rational(dual_rows), dim);
  Cone c;
  c.dim_ = dim;
  c.form_ = Form::Generator;
  for (const auto& r : facets.rays) c.halfspaces_.push_back(to_int(r));
  for (const auto& l : facets.lines) {
    IntVector h = to_int(l);
    c.halfspaces_.push_back(h);
    c.halfspaces_.push_back(-h);
  }
  // Normalise the generator side too: drop redundant rays, canonical lineality basis.
  const auto gens = exact::cone_generators(to_rational(c.halfspaces_), dim);
  for (const auto& r : gens.rays) c.rays_.push_back(to_int(r));
  for (const auto& l : gens.lines) c.lines_.push_back(to_int(l));
  return c;
}

int Cone::span_dim() const {
  std::vector<IntVector> all = rays_;
  all.insert(all.end(), lines_.begin(), lines_.end());
  if (all.empty()) return 0;
  return exact::rank(to_rational(all), dim_);
}

bool Cone::contains(const Eigen::VectorXd& w, double tol) const {
  for (const auto& h : halfspaces_) {
    const Eigen::VectorXd hd = h.cast<double>();
    if (hd.dot(w) < -tol * hd.norm() * std::max(1.0, w.norm())) return false;
  }
  return true;
}

bool Cone::interior_contains(const Eigen::VectorXd& w, double tol) const {
  if (!has_interior()) return false;
  for (const auto& h : halfspaces_) {
    const Eigen::VectorXd hd = h.cast<double>();
    if (hd.dot(w) <= tol * hd.norm() * std::max(1.0, w.norm())) return false;
  }
  return true;
}

Cone dual_cone(const Cone& c) {
  std::vector<IntVector> rows = c.rays();
  for (const auto& l : c.lines()) {
    rows.push_back(l);
    rows.push_back(-l);
  }
  Cone d = Cone::from_halfspaces(c.dim(), std::move(rows));
  return Cone::from_generators(d.dim(), d.rays(), d.lines());
}

}  // namespace toric

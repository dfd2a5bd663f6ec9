#include "toric/potentials.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "toric/error.hpp"

namespace toric {

namespace {

Eigen::VectorXd as_double(const exact::RatVector& v) {
  Eigen::VectorXd d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d(i) = exact::to_double(v[i]);
  return d;
}

void require_interior(const LabeledPolyhedron& p, const Eigen::VectorXd& x) {
  if (x.size() != p.dim()) throw Error(ErrorCode::InvalidArgument, "point has wrong dimension");
  const Eigen::VectorXd l = p.slacks(x);
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    if (!(l(i) > 0)) {
      std::ostringstream os;
      os << "point is not in int(P): L_" << i << " = " << l(i);
      throw Error(ErrorCode::OutOfDomain, os.str());
    }
  }
}

int pair_index(int n, int j, int k) {
  if (j > k) std::swap(j, k);
  int idx = 0;
  for (int r = 0; r < j; ++r) idx += n - r;
  return 1 + n + idx + (k - j);
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  value += o.value;
  grad += o.grad;
  hess += o.hess;
  return *this;
}

Jet& Jet::operator*=(double k) {
  value *= k;
  grad *= k;
  hess *= k;
  return *this;
}

Jet guillemin_jet(const LabeledPolyhedron& p, const Eigen::VectorXd& x) {
  require_interior(p, x);
  const Eigen::VectorXd l = p.slacks(x);
  Jet j = Jet::zero(p.dim());
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    const Eigen::VectorXd ai = p.A().row(i).transpose();
    const double lg = std::log(l(i));
    j.value += 0.5 * l(i) * lg;
    j.grad += 0.5 * (lg + 1.0) * ai;
    j.hess += (0.5 / l(i)) * ai * ai.transpose();
  }
  return j;
}

std::vector<Eigen::MatrixXd> guillemin_third(const LabeledPolyhedron& p, const Eigen::VectorXd& x) {
  require_interior(p, x);
  const int n = p.dim();
  const Eigen::VectorXd l = p.slacks(x);
  std::vector<Eigen::MatrixXd> t(n, Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    const Eigen::VectorXd ai = p.A().row(i).transpose();
    const Eigen::MatrixXd outer = ai * ai.transpose();
    for (int k = 0; k < n; ++k) t[k] -= (0.5 * ai(k) / (l(i) * l(i))) * outer;
  }
  return t;
}

double kahler_potential_canonical(const LabeledPolyhedron& p, const Eigen::VectorXd& x) {
  require_interior(p, x);
  const Eigen::VectorXd l = p.slacks(x);
  double phi = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) phi += 0.5 * (-p.a()(i) * std::log(l(i)) + (l(i) - p.a()(i)));
  return phi;
}

PotentialTerm PotentialTerm::affine(double constant, Eigen::VectorXd slope) {
  PotentialTerm t;
  t.kind = Kind::Affine;
  t.scalar = constant;
  t.vector = std::move(slope);
  return t;
}

PotentialTerm PotentialTerm::quadratic(Eigen::MatrixXd q, Eigen::VectorXd centre) {
  if (q.rows() != q.cols() || q.rows() != centre.size())
    throw Error(ErrorCode::InvalidArgument, "quadratic term has inconsistent sizes");
  PotentialTerm t;
  t.kind = Kind::Quadratic;
  t.matrix = 0.5 * (q + q.transpose());
  t.vector = std::move(centre);
  return t;
}

PotentialTerm PotentialTerm::bump(double amplitude, Eigen::VectorXd centre, Eigen::VectorXd radius) {
  if (centre.size() != radius.size() || (radius.array() <= 0).any())
    throw Error(ErrorCode::InvalidArgument, "bump needs positive radii matching the centre");
  PotentialTerm t;
  t.kind = Kind::Bump;
  t.scalar = amplitude;
  t.vector = std::move(centre);
  t.radius = std::move(radius);
  return t;
}

PotentialTerm PotentialTerm::facet_log(int facet, double coefficient) {
  PotentialTerm t;
  t.kind = Kind::FacetLog;
  t.facet = facet;
  t.scalar = coefficient;
  return t;
}

PotentialTerm PotentialTerm::scaled(double k) const {
  PotentialTerm t = *this;
  switch (kind) {
    case Kind::Affine:
      t.scalar *= k;
      t.vector *= k;
      break;
    case Kind::Quadratic:
      t.matrix *= k;
      break;
    case Kind::Bump:
    case Kind::FacetLog:
      t.scalar *= k;
      break;
  }
  return t;
}

Jet PotentialTerm::jet(const LabeledPolyhedron& p, const Eigen::VectorXd& x) const {
  const int n = static_cast<int>(x.size());
  Jet j = Jet::zero(n);
  switch (kind) {
    case Kind::Affine:
      j.value = scalar + vector.dot(x);
      j.grad = vector;
      break;
    case Kind::Quadratic: {
      const Eigen::VectorXd d = x - vector;
      j.grad = matrix * d;
      j.value = 0.5 * d.dot(j.grad);
      j.hess = matrix;
      break;
    }
    case Kind::Bump: {
      Eigen::VectorXd f(n), f1(n), f2(n);
      for (int k = 0; k < n; ++k) {
        const double t = (x(k) - vector(k)) / radius(k);
        if (std::abs(t) >= 1.0) return j;
        const double w = 1.0 - t * t;
        const double w3 = w * w * w;
        f(k) = w3 * w * w;
        f1(k) = -10.0 * t * w3 * w / radius(k);
        f2(k) = (-10.0 * w3 * w + 80.0 * t * t * w3) / (radius(k) * radius(k));
      }
      auto prod_except = [&](int a, int b) {
        double r = 1.0;
        for (int k = 0; k < n; ++k)
          if (k != a && k != b) r *= f(k);
        return r;
      };
      j.value = scalar * prod_except(-1, -1);
      for (int a = 0; a < n; ++a) {
        j.grad(a) = scalar * f1(a) * prod_except(a, -1);
        j.hess(a, a) = scalar * f2(a) * prod_except(a, -1);
        for (int b = a + 1; b < n; ++b) j.hess(a, b) = j.hess(b, a) = scalar * f1(a) * f1(b) * prod_except(a, b);
      }
      break;
    }
    case Kind::FacetLog: {
      if (facet < 0 || facet >= static_cast<int>(p.num_facets()))
        throw Error(ErrorCode::InvalidArgument, "facet-log term refers to a missing facet");
      const Eigen::VectorXd ai = p.A().row(facet).transpose();
      const double l = ai.dot(x) + p.a()(facet);
      if (!(l > 0)) throw Error(ErrorCode::OutOfDomain, "facet-log term evaluated off int(P)");
      j.value = scalar * l * std::log(l);
      j.grad = scalar * (std::log(l) + 1.0) * ai;
      j.hess = (scalar / l) * ai * ai.transpose();
      break;
    }
  }
  return j;
}

GridCorrection::GridCorrection(std::vector<cheb::Axis> axes, Eigen::VectorXd values, std::vector<bool> extrapolate_low,
                               std::vector<bool> extrapolate_high)
    : axes_(std::move(axes)),
      values_(std::move(values)),
      extrapolate_low_(std::move(extrapolate_low)),
      extrapolate_high_(std::move(extrapolate_high)) {
  const int n = dim();
  if (n < 1 || n > 2) throw Error(ErrorCode::UnsupportedDimension, "grid corrections exist in dimensions 1 and 2");
  if (static_cast<int>(extrapolate_low_.size()) != n || static_cast<int>(extrapolate_high_.size()) != n)
    throw Error(ErrorCode::InvalidArgument, "one extrapolation flag per axis is required");
  Eigen::Index total = 1;
  for (const auto& a : axes_) total *= a.size();
  if (values_.size() != total) throw Error(ErrorCode::InvalidArgument, "grid values do not match the axes");

  tables_.assign(1 + n + n * (n + 1) / 2, Eigen::VectorXd());
  tables_[0] = values_;
  if (n == 1) {
    tables_[1] = axes_[0].D1() * values_;
    tables_[2] = axes_[0].D2() * values_;
  } else {
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Index n0 = axes_[0].size(), n1 = axes_[1].size();
    const RowMat m = Eigen::Map<const RowMat>(values_.data(), n0, n1);
    auto flat = [&](const RowMat& r) { return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size())); };
    tables_[1] = flat(axes_[0].D1() * m);
    tables_[2] = flat(m * axes_[1].D1().transpose());
    tables_[pair_index(2, 0, 0)] = flat(axes_[0].D2() * m);
    tables_[pair_index(2, 0, 1)] = flat(axes_[0].D1() * m * axes_[1].D1().transpose());
    tables_[pair_index(2, 1, 1)] = flat(m * axes_[1].D2().transpose());
  }
}

int GridCorrection::order() const {
  int o = std::numeric_limits<int>::max();
  for (const auto& a : axes_) o = std::min(o, a.size() - 1);
  return o;
}

double GridCorrection::eval_table(std::size_t t, const std::vector<Eigen::RowVectorXd>& rows) const {
  const Eigen::VectorXd& v = tables_[t];
  if (dim() == 1) return rows[0].dot(v);
  const Eigen::Index n0 = axes_[0].size(), n1 = axes_[1].size();
  double s = 0.0;
  for (Eigen::Index i = 0; i < n0; ++i) s += rows[0](i) * rows[1].dot(v.segment(i * n1, n1));
  return s;
}

Jet GridCorrection::jet(const Eigen::VectorXd& x) const {
  const int n = dim();
  if (x.size() != n) throw Error(ErrorCode::InvalidArgument, "point has wrong dimension");
  Eigen::VectorXd c = x;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  std::vector<bool> ext(n, false);
  for (int k = 0; k < n; ++k) {
    if (extrapolate_high_[k] && x(k) > axes_[k].hi()) c(k) = axes_[k].hi();
    if (extrapolate_low_[k] && x(k) < axes_[k].lo()) c(k) = axes_[k].lo();
    d(k) = x(k) - c(k);
    ext[k] = d(k) != 0.0;
  }
  std::vector<Eigen::RowVectorXd> rows;
  for (int k = 0; k < n; ++k) rows.push_back(axes_[k].basis(c(k)));

  Jet j = Jet::zero(n);
  j.value = eval_table(0, rows);
  for (int k = 0; k < n; ++k) j.grad(k) = eval_table(1 + k, rows);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) j.hess(a, b) = j.hess(b, a) = eval_table(pair_index(n, a, b), rows);

  if (d.any()) {
    Jet e = j;
    e.value += j.grad.dot(d);
    for (int a = 0; a < n; ++a) {
      if (ext[a]) continue;
      e.grad(a) += j.hess.row(a).dot(d);
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (ext[a] && ext[b]) e.hess(a, b) = 0.0;
    return e;
  }
  return j;
}

SymplecticPotential::SymplecticPotential(std::shared_ptr<const LabeledPolyhedron> base, double canonical_weight,
                                         std::vector<PotentialTerm> terms,
                                         std::vector<std::pair<double, std::shared_ptr<const GridCorrection>>> grids)
    : base_(std::move(base)), canonical_(canonical_weight), terms_(std::move(terms)), grids_(std::move(grids)) {
  if (!base_) throw Error(ErrorCode::InvalidArgument, "potential needs a polyhedron");
  for (const auto& t : terms_) {
    if (t.kind == PotentialTerm::Kind::FacetLog) {
      if (t.facet < 0 || t.facet >= static_cast<int>(base_->num_facets()))
        throw Error(ErrorCode::InvalidArgument, "facet-log term refers to a missing facet");
    } else if (t.vector.size() != base_->dim()) {
      throw Error(ErrorCode::InvalidArgument, "potential term has the wrong dimension");
    }
  }
  for (const auto& [w, g] : grids_)
    if (!g || g->dim() != base_->dim()) throw Error(ErrorCode::InvalidArgument, "grid correction has the wrong dimension");
}

SymplecticPotential::Form SymplecticPotential::form() const {
  if (!grids_.empty()) return Form::GridCorrection;
  if (canonical_ == 1.0 && terms_.empty()) return Form::Canonical;
  return Form::ClosedForm;
}

Jet SymplecticPotential::correction_jet(const Eigen::VectorXd& x) const {
  require_interior(*base_, x);
  Jet j = Jet::zero(dim());
  if (canonical_ != 1.0) {
    Jet g = guillemin_jet(*base_, x);
    g *= (canonical_ - 1.0);
    j += g;
  }
  for (const auto& t : terms_) j += t.jet(*base_, x);
  for (const auto& [w, g] : grids_) {
    Jet e = g->jet(x);
    e *= w;
    j += e;
  }
  return j;
}

Jet SymplecticPotential::jet(const Eigen::VectorXd& x) const {
  require_interior(*base_, x);
  Jet j = Jet::zero(dim());
  if (canonical_ != 0.0) {
    j = guillemin_jet(*base_, x);
    j *= canonical_;
  }
  for (const auto& t : terms_) j += t.jet(*base_, x);
  for (const auto& [w, g] : grids_) {
    Jet e = g->jet(x);
    e *= w;
    j += e;
  }
  return j;
}

SymplecticPotential SymplecticPotential::plus(const PotentialTerm& t) const {
  auto terms = terms_;
  terms.push_back(t);
  return SymplecticPotential(base_, canonical_, std::move(terms), grids_);
}

SymplecticPotential SymplecticPotential::scaled(double k) const {
  std::vector<PotentialTerm> terms;
  for (const auto& t : terms_) terms.push_back(t.scaled(k));
  auto grids = grids_;
  for (auto& g : grids) g.first *= k;
  return SymplecticPotential(base_, canonical_ * k, std::move(terms), std::move(grids));
}

SymplecticPotential SymplecticPotential::operator+(const SymplecticPotential& o) const {
  if (o.dim() != dim()) throw Error(ErrorCode::InvalidArgument, "potentials live on different polyhedra");
  auto terms = terms_;
  terms.insert(terms.end(), o.terms_.begin(), o.terms_.end());
  auto grids = grids_;
  grids.insert(grids.end(), o.grids_.begin(), o.grids_.end());
  return SymplecticPotential(base_, canonical_ + o.canonical_, std::move(terms), std::move(grids));
}

SymplecticPotential guillemin_potential(std::shared_ptr<const LabeledPolyhedron> p) {
  if (!p) throw Error(ErrorCode::InvalidArgument, "null polyhedron");
  require_labeled(*p);
  return SymplecticPotential(std::move(p), 1.0);
}

SymplecticPotential guillemin_potential(const LabeledPolyhedron& p) {
  return guillemin_potential(std::make_shared<const LabeledPolyhedron>(p));
}

SymplecticPotential geodesic_point(const SymplecticPotential& v0, const SymplecticPotential& v1, double t) {
  return v0.scaled(1.0 - t) + v1.scaled(t);
}

bool positive_definite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  return (llt.matrixL().toDenseMatrix().diagonal().array() > 0).all();
}

LegendrePair legendre(const SymplecticPotential& u, const Eigen::VectorXd& x) {
  const Jet j = u.jet(x);
  if (!positive_definite(j.hess)) throw Error(ErrorCode::NotConvexHere, "Hess u is not positive definite");
  return {x, j.grad, j.grad.dot(x) - j.value};
}

Eigen::VectorXd inverse_legendre(const SymplecticPotential& u, const Eigen::VectorXd& y, double tol) {
  const LabeledPolyhedron& p = u.base();
  Eigen::VectorXd x = p.interior_point();
  auto objective = [&](const Jet& j, const Eigen::VectorXd& z) { return j.value - y.dot(z); };
  Jet j = u.jet(x);
  std::ostringstream trace;
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd g = j.grad - y;
    trace << "iter " << it << " |grad u - y| = " << g.norm() << "\n";
    if (g.norm() <= tol * (1.0 + y.norm())) return x;
    Eigen::LLT<Eigen::MatrixXd> llt(j.hess);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotConvexHere, "Hess u is not positive definite");
    const Eigen::VectorXd step = -llt.solve(g);
    double alpha = 1.0;
    const double f0 = objective(j, x);
    bool accepted = false;
    for (int k = 0; k < 60; ++k, alpha *= 0.5) {
      const Eigen::VectorXd z = x + alpha * step;
      if (!p.interior_contains(z)) continue;
      const Jet jz = u.jet(z);
      if (objective(jz, z) <= f0 + 1e-4 * alpha * g.dot(step) || alpha * step.norm() < 1e-15 * (1.0 + x.norm())) {
        x = z;
        j = jz;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if ((j.grad - y).norm() <= 1e3 * tol * (1.0 + y.norm())) return x;
  throw Error(ErrorCode::NoConvergence, "inverse Legendre transform did not converge").with_trace(trace.str());
}

MetricData metric(const SymplecticPotential& u, const Eigen::VectorXd& x) {
  const Jet j = u.jet(x);
  Eigen::LLT<Eigen::MatrixXd> llt(j.hess);
  if (llt.info() != Eigen::Success || !positive_definite(j.hess))
    throw Error(ErrorCode::NotConvexHere, "Hess u is not positive definite");
  const Eigen::MatrixXd h = llt.solve(Eigen::MatrixXd::Identity(x.size(), x.size()));
  return {x, j.hess, 0.5 * (h + h.transpose())};
}

Eigen::VectorXd facet_point(const LabeledPolyhedron& p, std::size_t facet) {
  const Facet& f = p.facet(facet);
  const IntVector mn = f.scaled_normal();
  const auto& g = p.generators();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(p.dim());
  int count = 0;
  for (const auto& pt : g.points) {
    exact::Rational l = f.offset;
    for (int k = 0; k < p.dim(); ++k) l += exact::Rational(mn(k)) * pt[k];
    if (l == 0) {
      c += as_double(pt);
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::EmptyFace, "facet has no vertex");
  c /= count;
  for (const auto& r : g.rays) {
    exact::Rational l = 0;
    for (int k = 0; k < p.dim(); ++k) l += exact::Rational(mn(k)) * r[k];
    if (l == 0) {
      const Eigen::VectorXd d = as_double(r);
      c += d / d.norm();
    }
  }
  return c;
}

std::vector<Eigen::VectorXd> sample_interior(const LabeledPolyhedron& p, int count, std::uint64_t seed,
                                             double ray_scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& g = p.generators();
  const Eigen::VectorXd centre = p.interior_point();
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p.dim());
    double total = 0.0;
    std::vector<double> lam(g.points.size());
    for (auto& l : lam) {
      l = -std::log(1.0 - unit(rng));
      total += l;
    }
    for (std::size_t i = 0; i < lam.size(); ++i) x += (lam[i] / total) * as_double(g.points[i]);
    for (const auto& r : g.rays) {
      const Eigen::VectorXd d = as_double(r);
      x += ray_scale * unit(rng) * d / d.norm();
    }
    out.push_back(x + 0.1 * (centre - x));
  }
  return out;
}

}  // namespace toric

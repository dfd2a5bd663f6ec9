#include "toric/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "toric/error.hpp"

namespace toric::quad {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// exp[d_0..d_m] · e^{-c} for nodes within a cluster of width <= 1 around c,
// through exp[d] = Σ_k h_k(d) / (m + k)!, h_k the complete homogeneous symmetric
// polynomials.
double clustered_dd(std::span<const double> s) {
  const int m = static_cast<int>(s.size()) - 1;
  const double c = 0.5 * (s.front() + s.back());
  constexpr int kMaxTerms = 64;
  std::array<double, kMaxTerms + 1> h{};
  h[0] = 1.0;
  double r = 0.0;
  for (double x : s) {
    const double d = x - c;
    r = std::max(r, std::abs(d));
    for (int k = 1; k <= kMaxTerms; ++k) h[k] += d * h[k - 1];
  }
  // |h_k| / (m+k)! <= r^k / (m! k!), which bounds the terms still to come.
  double sum = 0.0;
  double inv_fact = 1.0 / factorial(m);
  double bound = inv_fact;
  for (int k = 0; k <= kMaxTerms; ++k) {
    if (k > 0) {
      inv_fact /= (m + k);
      bound *= r / k;
    }
    sum += h[k] * inv_fact;
    if (bound < 1e-18 * std::abs(sum)) break;
  }
  return std::exp(c) * sum;
}

double sorted_dd(std::span<const double> s) {
  if (s.size() == 1) return std::exp(s.front());
  const double spread = s.back() - s.front();
  if (spread <= 1.0) return clustered_dd(s);
  return (sorted_dd(s.subspan(1)) - sorted_dd(s.first(s.size() - 1))) / spread;
}

void check_dim(const Simplex& s, const Eigen::VectorXd& b) {
  if (s.vertices.empty() || b.size() != static_cast<Eigen::Index>(s.vertices.size()) - 1)
    throw Error(ErrorCode::InvalidArgument, "simplex/weight dimension mismatch");
}

double unit_ball_volume(int k) {
  switch (k) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: return std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
  }
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

}  // namespace

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

Simplex Simplex::make(std::vector<Eigen::VectorXd> vertices) {
  Simplex s;
  const int n = static_cast<int>(vertices.size()) - 1;
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "a simplex needs at least two vertices");
  Eigen::MatrixXd e(n, n);
  for (int i = 0; i < n; ++i) {
    if (vertices[i + 1].size() != n) throw Error(ErrorCode::InvalidArgument, "simplex vertex has wrong length");
    e.col(i) = vertices[i + 1] - vertices[0];
  }
  s.volume = std::abs(e.determinant()) / factorial(n);
  s.vertices = std::move(vertices);
  return s;
}

double exp_divided_difference(std::span<const double> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::InvalidArgument, "divided difference needs at least one node");
  std::vector<double> s(nodes.begin(), nodes.end());
  std::sort(s.begin(), s.end());
  return sorted_dd(s);
}

double exp_integral_simplex(const Simplex& s, const Eigen::VectorXd& b) {
  check_dim(s, b);
  if (s.volume == 0.0) return 0.0;
  const int n = s.dim();
  std::vector<double> nodes;
  nodes.reserve(n + 1);
  for (const auto& v : s.vertices) nodes.push_back(-b.dot(v));
  return factorial(n) * s.volume * exp_divided_difference(nodes);
}

Moments simplex_moments(const Simplex& s, const Eigen::VectorXd& b) {
  check_dim(s, b);
  const int n = s.dim();
  Moments m{0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  if (s.volume == 0.0) return m;
  std::vector<double> nodes;
  for (const auto& v : s.vertices) nodes.push_back(-b.dot(v));
  const double scale = factorial(n) * s.volume;
  m.mass = scale * exp_divided_difference(nodes);

  // d/db_j of exp[s] with s_i = -<b, v_i> gives the node-repeated differences:
  //   ∫ x_j e^{-<b,x>}      = scale Σ_i v_ij exp[s, s_i]
  //   ∫ x_j x_k e^{-<b,x>}  = scale Σ_{i,l} v_ij v_lk (1 + δ_il) exp[s, s_i, s_l]
  const int nv = n + 1;
  std::vector<double> e1(nv);
  Eigen::MatrixXd e2(nv, nv);
  std::vector<double> buf(nodes);
  for (int i = 0; i < nv; ++i) {
    buf = nodes;
    buf.push_back(nodes[i]);
    e1[i] = exp_divided_difference(buf);
    for (int l = i; l < nv; ++l) {
      std::vector<double> b2 = buf;
      b2.push_back(nodes[l]);
      e2(i, l) = e2(l, i) = (i == l ? 2.0 : 1.0) * exp_divided_difference(b2);
    }
  }
  for (int i = 0; i < nv; ++i) m.first += e1[i] * s.vertices[i];
  m.first *= scale;
  for (int i = 0; i < nv; ++i)
    for (int l = 0; l < nv; ++l) m.second += e2(i, l) * s.vertices[i] * s.vertices[l].transpose();
  m.second *= scale;
  return m;
}

double moment_integral_simplex(const Simplex& s, const Eigen::VectorXd& b, std::span<const int> alpha) {
  check_dim(s, b);
  const int n = s.dim();
  if (static_cast<int>(alpha.size()) != n) throw Error(ErrorCode::InvalidArgument, "multi-index has wrong length");
  int order = 0;
  std::vector<int> idx;
  for (int k = 0; k < n; ++k) {
    if (alpha[k] < 0) throw Error(ErrorCode::InvalidArgument, "negative multi-index entry");
    order += alpha[k];
    for (int r = 0; r < alpha[k]; ++r) idx.push_back(k);
  }
  if (order > 2) throw Error(ErrorCode::UnsupportedMoment, "moments are supported up to total degree 2");
  if (order == 0) return exp_integral_simplex(s, b);
  const Moments m = simplex_moments(s, b);
  return order == 1 ? m.first(idx[0]) : m.second(idx[0], idx[1]);
}

double QuadraturePlan::integrate_exp() const {
  CompensatedSum acc;
  for (const auto& s : simplices) acc.add(exp_integral_simplex(s, weight));
  return acc.value();
}

Moments QuadraturePlan::integrate_moments() const {
  CompensatedSum mass;
  std::vector<CompensatedSum> first(dim);
  std::vector<CompensatedSum> second(dim * dim);
  for (const auto& s : simplices) {
    const Moments m = simplex_moments(s, weight);
    mass.add(m.mass);
    for (int j = 0; j < dim; ++j) {
      first[j].add(m.first(j));
      for (int k = 0; k < dim; ++k) second[j * dim + k].add(m.second(j, k));
    }
  }
  Moments out{mass.value(), Eigen::VectorXd(dim), Eigen::MatrixXd(dim, dim)};
  for (int j = 0; j < dim; ++j) {
    out.first(j) = first[j].value();
    for (int k = 0; k < dim; ++k) out.second(j, k) = second[j * dim + k].value();
  }
  return out;
}

std::optional<Eigen::VectorXd> divergence_witness(const LabeledPolyhedron& p, const Eigen::VectorXd& b) {
  if (b.size() != p.dim()) throw Error(ErrorCode::InvalidArgument, "weight vector has wrong length");
  const Cone c = asymptotic_cone(p);
  for (const auto& l : c.lines()) {
    Eigen::VectorXd w = l.cast<double>();
    if (b.dot(w) > 0) w = -w;
    return w;
  }
  for (const auto& r : c.rays()) {
    const Eigen::VectorXd w = r.cast<double>();
    if (!(b.dot(w) > 0)) return w;
  }
  return std::nullopt;
}

double tail_estimate(int dim, double b_norm, double epsilon, double support_constant, double truncation, int k) {
  // |x| <= (<b,x> + C)/ε on P, so each slab {t < <b,x> <= t + dt} has measure at
  // most κ_{n-1} R(t)^{n-1} dt/|b| with R(t) = (t + C)/ε.
  const int m = dim - 1 + k;
  const double tc = truncation + support_constant;
  double poly = 0.0;
  double falling = 1.0;  // m!/(m-j)!
  for (int j = 0; j <= m; ++j) {
    poly += falling * std::pow(tc, m - j);
    falling *= (m - j);
  }
  return unit_ball_volume(dim - 1) / (b_norm * std::pow(epsilon, m)) * std::exp(-truncation) * poly;
}

std::vector<Eigen::VectorXd> polytope_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& a) {
  const int n = static_cast<int>(A.cols());
  const int N = static_cast<int>(A.rows());
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  std::vector<Eigen::VectorXd> out;
  for_each_subset(N, n, [&](const std::vector<int>& subset) {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rhs(n);
    for (int r = 0; r < n; ++r) {
      M.row(r) = A.row(subset[r]);
      rhs(r) = -a(subset[r]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.rank() < n) return;
    const Eigen::VectorXd x = lu.solve(rhs);
    const Eigen::VectorXd sl = A * x + a;
    for (Eigen::Index i = 0; i < sl.size(); ++i)
      if (sl(i) < -1e-10 * scale * std::max(1.0, A.row(i).norm())) return;
    for (const auto& y : out)
      if ((y - x).norm() <= 1e-10 * std::max(scale, x.norm())) return;
    out.push_back(x);
  });
  return out;
}

std::vector<Simplex> triangulate(const Eigen::MatrixXd& A, const Eigen::VectorXd& a) {
  const int n = static_cast<int>(A.cols());
  auto verts = polytope_vertices(A, a);
  if (static_cast<int>(verts.size()) < n + 1) throw Error(ErrorCode::InvalidArgument, "polytope is degenerate");
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
  for (const auto& v : verts) centroid += v;
  centroid /= static_cast<double>(verts.size());

  std::vector<Simplex> out;
  if (n == 1) {
    auto [lo, hi] = std::minmax_element(verts.begin(), verts.end(),
                                        [](const auto& x, const auto& y) { return x(0) < y(0); });
    out.push_back(Simplex::make({*lo, *hi}));
    return out;
  }

  auto angle_sort = [](std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& c, const Eigen::VectorXd& e1,
                       const Eigen::VectorXd& e2) {
    std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
      return std::atan2((p - c).dot(e2), (p - c).dot(e1)) < std::atan2((q - c).dot(e2), (q - c).dot(e1));
    });
  };

  if (n == 2) {
    angle_sort(verts, centroid, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1));
    for (std::size_t i = 0; i < verts.size(); ++i)
      out.push_back(Simplex::make({centroid, verts[i], verts[(i + 1) % verts.size()]}));
    return out;
  }

  // n == 3: every facet polygon is fanned from its own centroid and coned to the
  // polytope centroid.
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index f = 0; f < A.rows(); ++f) {
    std::vector<Eigen::VectorXd> face;
    const double tol = 1e-9 * scale * std::max(1.0, A.row(f).norm());
    for (const auto& v : verts)
      if (std::abs(A.row(f).dot(v) + a(f)) <= tol) face.push_back(v);
    if (face.size() < 3) continue;
    Eigen::VectorXd fc = Eigen::VectorXd::Zero(3);
    for (const auto& v : face) fc += v;
    fc /= static_cast<double>(face.size());
    const Eigen::Vector3d normal = A.row(f).transpose().normalized();
    Eigen::Vector3d e1 = (face[0] - fc);
    e1 = (e1 - e1.dot(normal) * normal).normalized();
    const Eigen::Vector3d e2 = normal.cross(e1);
    angle_sort(face, fc, e1, e2);
    for (std::size_t i = 0; i < face.size(); ++i)
      out.push_back(Simplex::make({centroid, fc, face[i], face[(i + 1) % face.size()]}));
  }
  return out;
}

QuadraturePlan plan(const LabeledPolyhedron& p, const Eigen::VectorXd& b, double tol) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "plan tolerance must be positive");
  if (auto w = divergence_witness(p, b)) {
    std::ostringstream os;
    os << "weight is not in int(C'(P)); recession direction (";
    for (Eigen::Index i = 0; i < w->size(); ++i) os << (i ? "," : "") << (*w)(i);
    os << ") has <b,w> = " << b.dot(*w) << " <= 0";
    throw Error(ErrorCode::DivergentWeight, os.str(), *w);
  }
  const int n = p.dim();
  QuadraturePlan pl;
  pl.dim = n;
  pl.weight = b;

  const Cone rec = asymptotic_cone(p);
  std::vector<Eigen::VectorXd> verts;
  for (const auto& pt : p.generators().points) {
    Eigen::VectorXd v(n);
    for (int k = 0; k < n; ++k) v(k) = exact::to_double(pt[k]);
    verts.push_back(v);
  }

  if (rec.is_zero()) {
    pl.simplices = triangulate(p.A(), p.a());
    return pl;
  }

  pl.bounded = false;
  pl.epsilon = std::numeric_limits<double>::infinity();
  for (const auto& r : rec.rays()) {
    const Eigen::VectorXd w = r.cast<double>();
    pl.epsilon = std::min(pl.epsilon, b.dot(w) / w.norm());
  }
  double rho = 0.0, beta_min = std::numeric_limits<double>::infinity(), beta_max = -beta_min;
  for (const auto& v : verts) {
    rho = std::max(rho, v.norm());
    beta_min = std::min(beta_min, b.dot(v));
    beta_max = std::max(beta_max, b.dot(v));
  }
  pl.support_constant = pl.epsilon * rho - beta_min;

  auto bound = [&](double T) {
    double worst = 0.0;
    for (int k = 0; k <= 2; ++k)
      worst = std::max(worst, tail_estimate(n, b.norm(), pl.epsilon, pl.support_constant, T, k));
    return worst;
  };
  // Smallest T (to 1e-3 relative) past every vertex with bound(T) <= tol.
  double lo = std::max(beta_max, 0.0) + 1.0;
  double hi = lo;
  double step = 1.0;
  while (bound(hi) > tol) {
    lo = hi;
    hi += step;
    step *= 2.0;
    if (hi > 1e8) throw Error(ErrorCode::DivergentWeight, "tail bound cannot be certified (weight too close to the boundary of C'(P))");
  }
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) <= tol)
      hi = mid;
    else
      lo = mid;
  }
  pl.truncation = hi;
  pl.tail_bound = bound(hi);

  Eigen::MatrixXd A(p.A().rows() + 1, n);
  Eigen::VectorXd a(p.a().size() + 1);
  A.topRows(p.A().rows()) = p.A();
  a.head(p.a().size()) = p.a();
  A.row(p.A().rows()) = -b.transpose();
  a(p.a().size()) = pl.truncation;
  pl.simplices = triangulate(A, a);
  return pl;
}

}  // namespace toric::quad

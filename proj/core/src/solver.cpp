#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "toric/error.hpp"
#include "toric/shrinker.hpp"

namespace toric {

namespace {

struct Box {
  Eigen::VectorXd lo, hi;
  std::vector<bool> cut_low, cut_high;  // side produced by truncation rather than a facet
};

Box solve_box(const LabeledPolyhedron& p, const Eigen::VectorXd& b, double T) {
  const int n = p.dim();
  Box box{Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity()),
          Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity()), std::vector<bool>(n, false),
          std::vector<bool>(n, false)};
  for (const auto& f : p.facets()) {
    int axis = -1;
    for (int k = 0; k < n; ++k) {
      if (f.normal(k) == 0) continue;
      if (axis >= 0 || std::abs(f.normal(k)) != 1) {
        axis = -2;
        break;
      }
      axis = k;
    }
    if (axis < 0)
      throw Error(ErrorCode::UnsupportedDomain, "the solver needs every facet normal along a coordinate axis");
    const double bound = -f.offset_value() / static_cast<double>(f.label * f.normal(axis));
    if (f.normal(axis) > 0)
      box.lo(axis) = std::max(box.lo(axis), bound);
    else
      box.hi(axis) = std::min(box.hi(axis), bound);
  }
  for (int k = 0; k < n; ++k) {
    if (!std::isfinite(box.hi(k))) {
      if (!(b(k) > 0)) throw Error(ErrorCode::DivergentWeight, "weight does not decay along an unbounded axis");
      box.hi(k) = T / b(k);
      box.cut_high[k] = true;
    }
    if (!std::isfinite(box.lo(k))) {
      if (!(b(k) < 0)) throw Error(ErrorCode::DivergentWeight, "weight does not decay along an unbounded axis");
      box.lo(k) = T / b(k);
      box.cut_low[k] = true;
    }
    if (!(box.hi(k) > box.lo(k)))
      throw Error(ErrorCode::UnsupportedDomain, "truncation level leaves an empty box; increase --truncation");
  }
  return box;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// Discrete operators on the tensor grid (first axis slowest).
struct Operators {
  int n = 0;
  Eigen::Index size = 0;
  std::vector<Eigen::VectorXd> points;
  std::vector<Eigen::MatrixXd> d1;                 // ∂_k
  std::vector<std::vector<Eigen::MatrixXd>> d2;   // ∂_j ∂_k
};

Operators build_operators(const std::vector<cheb::Axis>& axes) {
  Operators op;
  op.n = static_cast<int>(axes.size());
  if (op.n == 1) {
    const auto& a = axes[0];
    op.size = a.size();
    for (int i = 0; i < a.size(); ++i) op.points.push_back(Eigen::VectorXd::Constant(1, a.nodes()(i)));
    op.d1 = {a.D1()};
    op.d2 = {{a.D2()}};
    return op;
  }
  const auto& a0 = axes[0];
  const auto& a1 = axes[1];
  op.size = static_cast<Eigen::Index>(a0.size()) * a1.size();
  for (int i = 0; i < a0.size(); ++i)
    for (int j = 0; j < a1.size(); ++j) op.points.push_back(Eigen::Vector2d(a0.nodes()(i), a1.nodes()(j)));
  const Eigen::MatrixXd i0 = Eigen::MatrixXd::Identity(a0.size(), a0.size());
  const Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(a1.size(), a1.size());
  op.d1 = {kron(a0.D1(), i1), kron(i0, a1.D1())};
  const Eigen::MatrixXd mixed = kron(a0.D1(), a1.D1());
  op.d2 = {{kron(a0.D2(), i1), mixed}, {mixed, kron(i0, a1.D2())}};
  return op;
}

// Row r with r·s = s(x) for the tensor interpolant.
Eigen::RowVectorXd tensor_basis(const std::vector<cheb::Axis>& axes, const Eigen::VectorXd& x) {
  Eigen::RowVectorXd r = axes[0].basis(x(0));
  for (std::size_t k = 1; k < axes.size(); ++k) {
    const Eigen::RowVectorXd next = axes[k].basis(x(static_cast<Eigen::Index>(k)));
    Eigen::RowVectorXd out(r.size() * next.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) out.segment(i * next.size(), next.size()) = r(i) * next;
    r = out;
  }
  return r;
}

struct State {
  Eigen::VectorXd residual;  // raw R at every node
  std::vector<Eigen::MatrixXd> hess_inv;
  bool convex = true;
  double deviation = 0.0;
  double midrange = 0.0;
};

}  // namespace

SolveResult solve(std::shared_ptr<const LabeledPolyhedron> pp, const SolitonVector& sv, const GridSpec& spec,
                  double tol) {
  const LabeledPolyhedron& p = *pp;
  require_labeled(p);
  const int n = p.dim();
  if (n > 2) throw Error(ErrorCode::UnsupportedDimension, "the solver handles dimensions 1 and 2");
  if (sv.b.size() != n) throw Error(ErrorCode::InvalidArgument, "soliton vector has the wrong dimension");
  if (spec.nodes < 6 || spec.nodes > 64) throw Error(ErrorCode::InvalidArgument, "grid size must be in 6..64");
  if (!(spec.truncation > 0)) throw Error(ErrorCode::InvalidArgument, "truncation level must be positive");
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const Eigen::VectorXd& b = sv.b;

  const Box box = solve_box(p, b, spec.truncation);
  std::vector<cheb::Axis> axes;
  for (int k = 0; k < n; ++k) axes.emplace_back(spec.nodes, box.lo(k), box.hi(k));
  const Operators op = build_operators(axes);
  const Eigen::Index M = op.size;

  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(n);
  if (!p.interior_contains(anchor)) anchor = 0.5 * (box.lo + box.hi);

  std::vector<Jet> base;
  base.reserve(M);
  for (const auto& x : op.points) base.push_back(guillemin_jet(p, x));

  auto evaluate = [&](const Eigen::VectorXd& s) {
    State st;
    st.residual.resize(M);
    st.hess_inv.resize(M);
    std::vector<Eigen::VectorXd> g(n);
    std::vector<std::vector<Eigen::VectorXd>> h(n, std::vector<Eigen::VectorXd>(n));
    for (int k = 0; k < n; ++k) g[k] = op.d1[k] * s;
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) h[j][k] = h[k][j] = op.d2[j][k] * s;
    for (Eigen::Index i = 0; i < M; ++i) {
      Eigen::VectorXd grad = base[i].grad;
      Eigen::MatrixXd hess = base[i].hess;
      for (int j = 0; j < n; ++j) {
        grad(j) += g[j](i);
        for (int k = 0; k < n; ++k) hess(j, k) += h[j][k](i);
      }
      Eigen::LLT<Eigen::MatrixXd> llt(hess);
      if (llt.info() != Eigen::Success || !positive_definite(hess)) {
        st.convex = false;
        return st;
      }
      const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
      const Eigen::VectorXd& x = op.points[i];
      st.residual(i) = grad.dot(x) - (base[i].value + s(i)) - logdet - b.dot(x);
      st.hess_inv[i] = llt.solve(Eigen::MatrixXd::Identity(n, n));
    }
    const double lo = st.residual.minCoeff(), hi = st.residual.maxCoeff();
    st.deviation = 0.5 * (hi - lo);
    st.midrange = 0.5 * (hi + lo);
    return st;
  };

  // Gauge rows: s(x0) = 0 and ∇s(x0) = 0.
  const Eigen::RowVectorXd at_anchor = tensor_basis(axes, anchor);
  std::vector<Eigen::RowVectorXd> gauge{at_anchor};
  for (int k = 0; k < n; ++k) gauge.push_back(at_anchor * op.d1[k]);
  // Truncated sides: ∂_k² s = 0 along the cut, one row per node of the other axis.
  std::vector<Eigen::RowVectorXd> cut_rows;
  std::ostringstream bc;
  for (int k = 0; k < n; ++k) {
    for (int side = 0; side < 2; ++side) {
      const bool cut = side == 0 ? box.cut_low[k] : box.cut_high[k];
      if (!cut) continue;
      const double xk = side == 0 ? box.lo(k) : box.hi(k);
      bc << (bc.tellp() > 0 ? "; " : "") << "d2s/dx" << k << "^2 = 0 at x" << k << " = " << xk
         << ", affine continuation beyond";
      if (n == 1) {
        cut_rows.push_back(tensor_basis(axes, Eigen::VectorXd::Constant(1, xk)) * op.d2[0][0]);
      } else {
        const int other = 1 - k;
        for (int j = 0; j < axes[other].size(); ++j) {
          Eigen::VectorXd x(2);
          x(k) = xk;
          x(other) = axes[other].nodes()(j);
          cut_rows.push_back(tensor_basis(axes, x) * op.d2[k][k]);
        }
      }
    }
  }

  Eigen::VectorXd s = Eigen::VectorXd::Zero(M);
  double c = 0.0;
  State st = evaluate(s);
  if (!st.convex) throw Error(ErrorCode::NotConvexHere, "canonical potential is not convex on the grid");
  c = st.midrange;
  SolveResult out{guillemin_potential(pp), 0.0, 0.0, 0, anchor, spec.truncation, {st.deviation}, bc.str()};
  std::ostringstream trace;
  trace << "iter 0 deviation " << st.deviation << "\n";

  const Eigen::Index rows = M + static_cast<Eigen::Index>(gauge.size() + cut_rows.size());
  int it = 0;
  while (st.deviation > tol) {
    if (it >= spec.max_iterations)
      throw Error(ErrorCode::NoConvergence, "solver hit the iteration cap").with_trace(trace.str());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, M + 1);
    Eigen::VectorXd F(rows);
    for (Eigen::Index i = 0; i < M; ++i) {
      Eigen::RowVectorXd row = -Eigen::RowVectorXd::Unit(M, i);
      for (int k = 0; k < n; ++k) row += op.points[i](k) * op.d1[k].row(i);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) row -= st.hess_inv[i](j, k) * op.d2[j][k].row(i);
      J.block(i, 0, 1, M) = row;
      J(i, M) = -1.0;
      F(i) = st.residual(i) - c;
    }
    Eigen::Index r = M;
    for (const auto& g : gauge) {
      J.block(r, 0, 1, M) = g;
      F(r++) = g.dot(s);
    }
    for (const auto& g : cut_rows) {
      J.block(r, 0, 1, M) = g;
      F(r++) = g.dot(s);
    }
    const Eigen::VectorXd delta = -J.colPivHouseholderQr().solve(F);

    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, alpha *= 0.5) {
      const Eigen::VectorXd trial = s + alpha * delta.head(M);
      State ts = evaluate(trial);
      if (!ts.convex || !(ts.deviation < st.deviation)) continue;
      s = trial;
      c += alpha * delta(M);
      st = std::move(ts);
      accepted = true;
      break;
    }
    ++it;
    trace << "iter " << it << " step " << alpha << " deviation " << st.deviation << "\n";
    if (!accepted)
      throw Error(ErrorCode::NoConvergence, "line search failed to reduce the residual deviation")
          .with_trace(trace.str());
    out.deviation_history.push_back(st.deviation);
  }

  std::vector<bool> low(box.cut_low), high(box.cut_high);
  auto grid = std::make_shared<GridCorrection>(axes, s, low, high);
  grid->anchor = anchor;
  grid->weight = b;
  grid->constant = st.midrange;
  const bool truncated = std::any_of(low.begin(), low.end(), [](bool f) { return f; }) ||
                         std::any_of(high.begin(), high.end(), [](bool f) { return f; });
  grid->truncation = truncated ? spec.truncation : std::numeric_limits<double>::infinity();
  out.potential = SymplecticPotential(pp, 1.0, {}, {{1.0, grid}});
  out.residual_constant = st.midrange;
  out.residual_deviation = st.deviation;
  out.iterations = it;
  out.truncation = grid->truncation;
  return out;
}

SolveResult solve(const LabeledPolyhedron& p, const SolitonVector& b, const GridSpec& grid, double tol) {
  return solve(std::make_shared<const LabeledPolyhedron>(p), b, grid, tol);
}

}  // namespace toric

#include "toric/lattice.hpp"

#include <cstdlib>
#include <sstream>
#include <utility>

#include "toric/error.hpp"

namespace toric::lattice {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer addition overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer multiplication overflow");
  return r;
}

namespace {

std::int64_t checked_neg(std::int64_t a) { return checked_mul(a, -1); }

std::int64_t checked_abs(std::int64_t a) { return a < 0 ? checked_neg(a) : a; }

// row_i += k * row_j (rows of m)
void add_row(IntMatrix& m, Eigen::Index i, Eigen::Index j, std::int64_t k) {
  if (k == 0) return;
  for (Eigen::Index c = 0; c < m.cols(); ++c) m(i, c) = checked_add(m(i, c), checked_mul(k, m(j, c)));
}

void add_col(IntMatrix& m, Eigen::Index i, Eigen::Index j, std::int64_t k) {
  if (k == 0) return;
  for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, i) = checked_add(m(r, i), checked_mul(k, m(r, j)));
}

// Floor-free quotient used for reductions: a - q*b has |.| < |b|.
std::int64_t quot(std::int64_t a, std::int64_t b) { return a / b; }

}  // namespace

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = checked_abs(a);
  b = checked_abs(b);
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

PrimitiveReduction primitive_reduce(const IntVector& v) {
  std::int64_t g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v(i));
  if (g == 0) throw Error(ErrorCode::ZeroNormal, "zero vector has no primitive direction");
  return {v / g, g};
}

SmithForm smith_normal_form(const IntMatrix& A) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  SmithForm f;
  f.S = A;
  f.U = IntMatrix::Identity(m, m);
  f.V = IntMatrix::Identity(n, n);
  IntMatrix& S = f.S;

  auto swap_rows = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    S.row(i).swap(S.row(j));
    f.U.row(i).swap(f.U.row(j));
  };
  auto swap_cols = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    S.col(i).swap(S.col(j));
    f.V.col(i).swap(f.V.col(j));
  };

  const Eigen::Index steps = std::min(m, n);
  for (Eigen::Index t = 0; t < steps; ++t) {
    // Pivot: smallest nonzero magnitude in the trailing block.
    while (true) {
      Eigen::Index pr = -1, pc = -1;
      std::int64_t best = 0;
      for (Eigen::Index r = t; r < m; ++r)
        for (Eigen::Index c = t; c < n; ++c)
          if (S(r, c) != 0 && (best == 0 || checked_abs(S(r, c)) < best)) {
            best = checked_abs(S(r, c));
            pr = r;
            pc = c;
          }
      if (pr < 0) {
        f.rank = static_cast<int>(t);
        return f;
      }
      swap_rows(t, pr);
      swap_cols(t, pc);

      bool clean = true;
      for (Eigen::Index r = t + 1; r < m; ++r) {
        std::int64_t q = quot(S(r, t), S(t, t));
        add_row(S, r, t, checked_neg(q));
        add_row(f.U, r, t, checked_neg(q));
        if (S(r, t) != 0) clean = false;
      }
      for (Eigen::Index c = t + 1; c < n; ++c) {
        std::int64_t q = quot(S(t, c), S(t, t));
        add_col(S, c, t, checked_neg(q));
        add_col(f.V, c, t, checked_neg(q));
        if (S(t, c) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: if some trailing entry is not a multiple of the pivot,
      // fold its row into row t and start over.
      Eigen::Index bad = -1;
      for (Eigen::Index r = t + 1; r < m && bad < 0; ++r)
        for (Eigen::Index c = t + 1; c < n; ++c)
          if (S(r, c) % S(t, t) != 0) {
            bad = r;
            break;
          }
      if (bad < 0) break;
      add_row(S, t, bad, 1);
      add_row(f.U, t, bad, 1);
    }
    if (S(t, t) < 0) {
      S(t, t) = checked_neg(S(t, t));
      for (Eigen::Index c = 0; c < m; ++c) f.U(t, c) = checked_neg(f.U(t, c));
    }
    f.rank = static_cast<int>(t + 1);
  }
  return f;
}

std::int64_t AbelianGroup::order() const {
  std::int64_t o = 1;
  for (auto d : invariant_factors) o = checked_mul(o, d);
  return o;
}

std::string AbelianGroup::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (auto d : invariant_factors) {
    os << (first ? "" : " x ") << "Z/" << d;
    first = false;
  }
  for (int i = 0; i < free_rank; ++i) {
    os << (first ? "" : " x ") << "Z";
    first = false;
  }
  if (first) os << "Z/1";
  return os.str();
}

AbelianGroup quotient_group(const IntMatrix& generators, int ambient_rank) {
  if (generators.cols() != ambient_rank)
    throw Error(ErrorCode::InvalidArgument, "generator length differs from ambient rank");
  const SmithForm snf = smith_normal_form(generators);
  if (snf.rank < ambient_rank) {
    std::ostringstream os;
    os << "generators span rank " << snf.rank << " < " << ambient_rank;
    throw Error(ErrorCode::NotFullRank, os.str());
  }
  AbelianGroup g;
  for (int i = 0; i < snf.rank; ++i)
    if (snf.S(i, i) > 1) g.invariant_factors.push_back(snf.S(i, i));
  return g;
}

IntMatrix integer_kernel(const IntMatrix& A) {
  const SmithForm snf = smith_normal_form(A);
  const Eigen::Index n = A.cols();
  IntMatrix K(n, n - snf.rank);
  for (Eigen::Index j = snf.rank; j < n; ++j) {
    IntVector col = snf.V.col(j);
    // Sign convention: first nonzero entry positive.
    for (Eigen::Index i = 0; i < n; ++i)
      if (col(i) != 0) {
        if (col(i) < 0) col = -col;
        break;
      }
    K.col(j - snf.rank) = col;
  }
  return K;
}

IntMatrix saturation_basis(const IntMatrix& A) {
  // U A V = S  =>  A = U^{-1} S V^{-1}; the first `rank` columns of U^{-1}
  // are a Z-basis of span(A) ∩ Z^m.
  const SmithForm snf = smith_normal_form(A);
  const Eigen::Index m = A.rows();
  // Invert the unimodular U exactly via its own Smith form (which is the identity).
  const SmithForm inv = smith_normal_form(snf.U);
  // inv.U * U * inv.V = I  =>  U^{-1} = inv.V * inv.U
  IntMatrix Uinv(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      std::int64_t s = 0;
      for (Eigen::Index k = 0; k < m; ++k) s = checked_add(s, checked_mul(inv.V(i, k), inv.U(k, j)));
      Uinv(i, j) = s;
    }
  return Uinv.leftCols(snf.rank);
}

std::int64_t determinant(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::InvalidArgument, "determinant of non-square matrix");
  const Eigen::Index n = A.rows();
  if (n == 0) return 1;
  if (n == 1) return A(0, 0);
  std::int64_t det = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    IntMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = A(r, c);
      }
    }
    std::int64_t term = checked_mul(A(0, j), determinant(minor));
    det = checked_add(det, (j % 2 == 0) ? term : checked_neg(term));
  }
  return det;
}

}  // namespace toric::lattice

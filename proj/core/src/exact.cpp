#include "toric/exact.hpp"

#include <algorithm>
#include <limits>

#include "toric/error.hpp"

namespace toric::exact {

Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<int> rref(RatMatrix& m, int cols) {
  std::vector<int> pivots;
  int row = 0;
  const int rows = static_cast<int>(m.size());
  for (int col = 0; col < cols && row < rows; ++col) {
    int piv = -1;
    for (int r = row; r < rows; ++r) {
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(m[row], m[piv]);
    // Row operations span the whole row so augmented columns follow along.
    const int width = static_cast<int>(m[row].size());
    const Rational inv = 1 / m[row][col];
    for (int c = col; c < width; ++c) m[row][c] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (int c = col; c < width; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(RatMatrix m, int cols) { return static_cast<int>(rref(m, cols).size()); }

std::vector<RatVector> kernel(RatMatrix m, int cols) {
  const auto pivots = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatVector> solve(RatMatrix a, RatVector rhs) {
  const int n = static_cast<int>(rhs.size());
  for (int i = 0; i < n; ++i) a[i].push_back(rhs[i]);
  const auto pivots = rref(a, n);
  if (static_cast<int>(pivots.size()) < n) return std::nullopt;
  RatVector x(n);
  for (int i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

RatVector primitive_direction(const RatVector& v) {
  Integer l = 1;
  for (const auto& q : v) l = boost::multiprecision::lcm(l, Integer(denominator(q)));
  Integer g = 0;
  std::vector<Integer> ints;
  ints.reserve(v.size());
  for (const auto& q : v) {
    Integer k = numerator(q) * (l / denominator(q));
    g = boost::multiprecision::gcd(g, k);
    ints.push_back(std::move(k));
  }
  RatVector out;
  out.reserve(v.size());
  for (auto& k : ints) out.emplace_back(g == 0 ? k : Integer(k / g));
  return out;
}

long long to_int64(const Rational& q) {
  if (denominator(q) != 1) throw Error(ErrorCode::InvalidArgument, "non-integer value");
  const Integer& k = numerator(q);
  if (k > std::numeric_limits<long long>::max() || k < std::numeric_limits<long long>::min())
    throw Error(ErrorCode::Overflow, "integer does not fit in 64 bits");
  return static_cast<long long>(k);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order.
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

ConeGenerators cone_generators(const RatMatrix& h, int cols) {
  ConeGenerators out;
  out.lines = kernel(h, cols);
  const int d = static_cast<int>(out.lines.size());
  if (d == cols) return out;
  const int k = cols - 1 - d;
  const int m = static_cast<int>(h.size());

  auto feasible = [&](const RatVector& w) {
    for (const auto& row : h)
      if (dot(row, w) < 0) return false;
    return true;
  };
  auto add_ray = [&](const RatVector& w) {
    RatVector p = primitive_direction(w);
    if (std::find(out.rays.begin(), out.rays.end(), p) == out.rays.end()) out.rays.push_back(std::move(p));
  };

  for_each_subset(m, k, [&](const std::vector<int>& subset) {
    RatMatrix sys;
    sys.reserve(subset.size() + out.lines.size());
    for (int i : subset) sys.push_back(h[i]);
    for (const auto& l : out.lines) sys.push_back(l);
    auto ker = kernel(sys, cols);
    if (ker.size() != 1) return;
    RatVector w = ker[0];
    if (feasible(w)) add_ray(w);
    for (auto& q : w) q = -q;
    if (feasible(w)) add_ray(w);
  });
  std::sort(out.rays.begin(), out.rays.end());
  return out;
}

}  // namespace toric::exact

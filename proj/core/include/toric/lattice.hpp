#pragma once

// Exact integer linear algebra: primitive vectors, Smith normal form and
// quotients of full-rank lattices. All arithmetic is checked int64; any
// intermediate overflow throws ErrorCode::Overflow instead of wrapping.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace toric {

using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

namespace lattice {

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t gcd(std::int64_t a, std::int64_t b);

struct PrimitiveReduction {
  IntVector primitive;
  std::int64_t multiplier;  // always >= 1; the sign lives in `primitive`
};

/// v = multiplier * primitive with gcd(primitive) = 1. Throws ZeroNormal for v = 0.
PrimitiveReduction primitive_reduce(const IntVector& v);

struct SmithForm {
  IntMatrix U;  // rows x rows, unimodular
  IntMatrix S;  // rows x cols, diagonal, d_i | d_{i+1}, d_i >= 0
  IntMatrix V;  // cols x cols, unimodular
  int rank = 0;
};

/// U * A * V == S exactly.
SmithForm smith_normal_form(const IntMatrix& A);

/// Finite abelian group ⊕ Z/d_i (d_1 | d_2 | ..., each d_i >= 2) plus free rank.
struct AbelianGroup {
  std::vector<std::int64_t> invariant_factors;
  int free_rank = 0;

  bool trivial() const { return invariant_factors.empty() && free_rank == 0; }
  /// Order of the torsion part (1 for the trivial group).
  std::int64_t order() const;
  /// "Z/1" for the trivial group, else e.g. "Z/2 x Z/4".
  std::string to_string() const;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

/// Z^ambient_rank modulo the lattice spanned by the rows of `generators`.
/// Throws NotFullRank when the rows do not span a rank-`ambient_rank` lattice.
AbelianGroup quotient_group(const IntMatrix& generators, int ambient_rank);

/// Z-basis (as columns) of {x in Z^cols : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& A);

/// Z-basis (as columns) of span_R(columns of A) ∩ Z^rows.
IntMatrix saturation_basis(const IntMatrix& A);

std::int64_t determinant(const IntMatrix& A);

}  // namespace lattice
}  // namespace toric

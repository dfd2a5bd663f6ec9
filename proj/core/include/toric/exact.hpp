#pragma once

// Exact rational linear algebra for the small systems that show up in
// polyhedral predicates (dimension <= 4, a few dozen rows).

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace toric::exact {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;
using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;  // row-major, rows may be empty only if cols == 0

Rational dot(const RatVector& a, const RatVector& b);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(RatMatrix& m, int cols);

int rank(RatMatrix m, int cols);

/// Basis of {x : m x = 0}.
std::vector<RatVector> kernel(RatMatrix m, int cols);

/// Unique solution of a square nonsingular system, or nullopt when singular.
std::optional<RatVector> solve(RatMatrix a, RatVector rhs);

/// Scale a nonzero rational vector to the primitive integer vector with the
/// same direction (positive multiple). Entries are integer-valued rationals.
RatVector primitive_direction(const RatVector& v);

/// Integer-valued rational to int64; throws Overflow when it does not fit.
long long to_int64(const Rational& q);

bool is_zero(const RatVector& v);

double to_double(const Rational& q);

/// Extreme rays and a lineality basis of the cone {x : h x >= 0} in R^cols.
/// Brute-force double description: every ray is a one-dimensional solution of
/// some set of tight constraints. Intended for cols <= 4.
struct ConeGenerators {
  std::vector<RatVector> rays;   // pointed part, primitive-direction scaled
  std::vector<RatVector> lines;  // basis of the lineality space
};
ConeGenerators cone_generators(const RatMatrix& h, int cols);

}  // namespace toric::exact

#ifndef LOGLIN_RATIONAL_HPP
#define LOGLIN_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loglin {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Canonical text form: "p/q" in lowest terms, or "p" when q == 1.
std::string format_rational(const Rational& r);

/// Accepts "p", "p/q", and plain decimals ("0.25", "-1.5e-3"), all exactly.
Rational parse_rational(std::string_view text);

double to_double(const Rational& r);
std::vector<double> to_double(std::span<const Rational> v);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double x);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

/// Row rank by fraction-exact Gaussian elimination.
std::size_t rank(RationalMatrix rows);

/// Affine rank of a point set: rank of {p_k - p_0}. Empty set has rank -1.
int affine_rank(const RationalMatrix& points);

Rational determinant(RationalMatrix square);

/// Solves A x = b for square nonsingular A; throws Error(Singular) otherwise.
RationalVector solve(RationalMatrix a, RationalVector b);

/// Inverse of a square nonsingular matrix.
RationalMatrix inverse(const RationalMatrix& a);

}  // namespace loglin

#endif  // LOGLIN_RATIONAL_HPP

#include "loglin/rational.hpp"

#include "loglin/error.hpp"

#include <cctype>
#include <cmath>
#include <utility>

namespace loglin {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::NotDecomposable: return "NotDecomposable";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::BoundaryOrOutside: return "BoundaryOrOutside";
    case ErrorCode::OutsidePolytope: return "OutsidePolytope";
    case ErrorCode::IncompleteFacets: return "IncompleteFacets";
    case ErrorCode::NotInModel: return "NotInModel";
    case ErrorCode::NonComputable: return "NonComputable";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Singular: return "SingularBasis";
    case ErrorCode::WrongCone: return "WrongCone";
  }
  return "Unknown";
}

std::string format_rational(const Rational& r) { return r.str(); }

namespace {

Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail(ErrorCode::Parse, "not a number: '" + std::string(text) + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') {
      fail(ErrorCode::Parse, "not a number: '" + std::string(text) + "'");
    }
    ++pos;
    const std::string exp_text(text.substr(pos));
    if (exp_text.empty()) fail(ErrorCode::Parse, "bad exponent in '" + std::string(text) + "'");
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "bad exponent in '" + std::string(text) + "'");
    }
    if (used != exp_text.size()) fail(ErrorCode::Parse, "bad exponent in '" + std::string(text) + "'");
    exponent += e;
  }
  if (exponent > 4000 || exponent < -4000) fail(ErrorCode::Parse, "exponent out of range");
  // A leading zero would select octal in the GMP string constructor.
  const auto nonzero = digits.find_first_not_of('0');
  digits = nonzero == std::string::npos ? std::string("0") : digits.substr(nonzero);
  Rational value{Integer(digits)};
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exponent)));
  if (exponent >= 0) {
    value *= Rational(scale);
  } else {
    value /= Rational(scale);
  }
  return negative ? Rational(-value) : value;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Rational parse_rational(std::string_view raw) {
  const std::string text = trim(raw);
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) fail(ErrorCode::Parse, "zero denominator in '" + text + "'");
  return num / den;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::vector<double> to_double(std::span<const Rational> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, "non-finite value");
  return Rational(x);
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != 0 && b[k] != 0) s += a[k] * b[k];
  }
  return s;
}

namespace {

// Reduces rows in place to row echelon form; returns the rank.
std::size_t eliminate(RationalMatrix& rows, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t k = r + 1; k < rows.size(); ++k) {
      if (rows[k][c] == 0) continue;
      const Rational f = rows[k][c] / rows[r][c];
      for (std::size_t cc = c; cc < cols; ++cc) {
        if (rows[r][cc] != 0) rows[k][cc] -= f * rows[r][cc];
      }
    }
    ++r;
  }
  return r;
}

}  // namespace

std::size_t rank(RationalMatrix rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  return eliminate(rows, cols);
}

int affine_rank(const RationalMatrix& points) {
  if (points.empty()) return -1;
  RationalMatrix diffs;
  diffs.reserve(points.size() - 1);
  for (std::size_t k = 1; k < points.size(); ++k) {
    RationalVector d(points[k].size());
    for (std::size_t c = 0; c < d.size(); ++c) d[c] = points[k][c] - points[0][c];
    diffs.push_back(std::move(d));
  }
  return static_cast<int>(rank(std::move(diffs)));
}

Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t k = c + 1; k < n; ++k) {
      if (a[k][c] == 0) continue;
      const Rational f = a[k][c] / a[c][c];
      for (std::size_t cc = c; cc < n; ++cc) a[k][cc] -= f * a[c][cc];
    }
  }
  return det;
}

RationalVector solve(RationalMatrix a, RationalVector b) {
  const std::size_t n = a.size();
  for (std::size_t r = 0; r < n; ++r) a[r].push_back(b[r]);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) fail(ErrorCode::Singular, "singular linear system");
    std::swap(a[pivot], a[c]);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == c || a[k][c] == 0) continue;
      const Rational f = a[k][c] / a[c][c];
      for (std::size_t cc = c; cc <= n; ++cc) a[k][cc] -= f * a[c][cc];
    }
  }
  RationalVector x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = a[r][n] / a[r][r];
  return x;
}

RationalMatrix inverse(const RationalMatrix& a) {
  const std::size_t n = a.size();
  RationalMatrix aug(n, RationalVector(2 * n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug[r][c] = a[r][c];
    aug[r][n + r] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && aug[pivot][c] == 0) ++pivot;
    if (pivot == n) fail(ErrorCode::Singular, "singular matrix");
    std::swap(aug[pivot], aug[c]);
    const Rational p = aug[c][c];
    for (auto& x : aug[c]) x /= p;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == c || aug[k][c] == 0) continue;
      const Rational f = aug[k][c];
      for (std::size_t cc = 0; cc < 2 * n; ++cc) {
        if (aug[c][cc] != 0) aug[k][cc] -= f * aug[c][cc];
      }
    }
  }
  RationalMatrix inv(n, RationalVector(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) inv[r][c] = aug[r][n + c];
  }
  return inv;
}

}  // namespace loglin

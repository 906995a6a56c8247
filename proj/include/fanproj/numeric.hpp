#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fanproj {

/// Arbitrary-precision integer. All lattice data is exact; no floating
/// point is used anywhere in the library.
using Int = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational, kept in lowest terms with positive
/// denominator by the backend.
using Rat = boost::multiprecision::cpp_rational;

/// Coordinate vector of a lattice point, expressed in the fixed ordered
/// basis of N.
using LatticeVector = std::vector<Int>;

/// Coordinate vector of a dual lattice point, expressed in the dual basis
/// of M. Structurally identical to LatticeVector; the alias documents
/// which side of the pairing a value lives on.
using Covector = std::vector<Int>;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

class ZeroVectorError : public std::runtime_error {
 public:
  explicit ZeroVectorError(const std::string& what = "zero vector")
      : std::runtime_error(what) {}
};

class DimensionMismatchError : public std::runtime_error {
 public:
  explicit DimensionMismatchError(const std::string& what = "dimension mismatch")
      : std::runtime_error(what) {}
};

class DependentColumnsError : public std::runtime_error {
 public:
  explicit DependentColumnsError(const std::string& what = "linearly dependent columns")
      : std::runtime_error(what) {}
};

inline std::string to_string(const IntVec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].str();
  }
  return out + ")";
}

/// Divides out the gcd of the coordinates. Returns the primitive vector
/// and the (positive) content.
inline std::pair<IntVec, Int> primitive(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  if (g == 0) throw ZeroVectorError();
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return {std::move(out), g};
}

inline bool is_primitive(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  return g == 1;
}

/// Exact dual pairing m(v).
inline Int pairing(const Covector& m, const LatticeVector& v) {
  if (m.size() != v.size())
    throw DimensionMismatchError("pairing: lengths " + std::to_string(m.size()) +
                                 " vs " + std::to_string(v.size()));
  Int acc = 0;
  for (std::size_t i = 0; i < m.size(); ++i) acc += m[i] * v[i];
  return acc;
}

inline IntVec add(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw DimensionMismatchError("add");
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline IntVec negate(const IntVec& a) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

/// Lexicographic order on coordinate sequences, first coordinate most
/// significant. This is the order induced by the fixed basis; it drives
/// normal ordering and tie-breaking, so it must stay exact.
inline std::strong_ordering lex_compare(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw DimensionMismatchError("lex_compare");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return std::strong_ordering::less;
    if (a[i] > b[i]) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

/// Comparator usable as std::set / std::map key ordering for coordinate
/// vectors (shorter vectors first, then lexicographic).
struct LexLess {
  bool operator()(const IntVec& a, const IntVec& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return lex_compare(a, b) == std::strong_ordering::less;
  }
};

/// Exact determinant of the matrix whose columns are the given vectors.
/// Fraction-free Bareiss elimination; every division below is exact.
inline Int determinant(const std::vector<IntVec>& columns) {
  const std::size_t n = columns.size();
  for (const IntVec& c : columns)
    if (c.size() != n) throw DimensionMismatchError("determinant: need n columns of length n");
  if (n == 0) return 1;
  std::vector<IntVec> m(n, IntVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = columns[j][i];
  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

namespace detail {

// Gauss-Jordan on an augmented rational matrix. Returns the coefficient
// vector when the target lies in the column span, nullopt otherwise.
// Throws if the columns are dependent.
inline std::optional<RatVec> solve_columns(const std::vector<RatVec>& columns,
                                           const RatVec& target) {
  const std::size_t k = columns.size();
  const std::size_t n = target.size();
  for (const RatVec& c : columns)
    if (c.size() != n) throw DimensionMismatchError("solve: column length");
  std::vector<RatVec> a(n, RatVec(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = columns[j][i];
    a[i][k] = target[i];
  }
  std::size_t row = 0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = row;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw DependentColumnsError();
    std::swap(a[row], a[piv]);
    const Rat p = a[row][col];
    for (std::size_t j = col; j <= k; ++j) a[row][j] /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rat f = a[i][col];
      for (std::size_t j = col; j <= k; ++j) a[i][j] -= f * a[row][j];
    }
    ++row;
  }
  for (std::size_t i = row; i < n; ++i)
    if (a[i][k] != 0) return std::nullopt;
  RatVec x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = a[i][k];
  return x;
}

inline std::vector<RatVec> to_rat_columns(const std::vector<IntVec>& columns) {
  std::vector<RatVec> out;
  out.reserve(columns.size());
  for (const IntVec& c : columns) {
    RatVec rc(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) rc[i] = Rat(c[i]);
    out.push_back(std::move(rc));
  }
  return out;
}

}  // namespace detail

/// Expresses target in the span of the given (independent) integer
/// columns. Exact rational coefficients, nullopt when target is outside
/// the span.
inline std::optional<RatVec> solve_exact(const std::vector<IntVec>& columns,
                                         const IntVec& target) {
  RatVec t(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) t[i] = Rat(target[i]);
  return detail::solve_columns(detail::to_rat_columns(columns), t);
}

/// Same, with a rational right-hand side (used when solving for the
/// linear pieces of a support function).
inline std::optional<RatVec> solve_exact(const std::vector<IntVec>& columns,
                                         const RatVec& target) {
  return detail::solve_columns(detail::to_rat_columns(columns), target);
}

/// Rank of the matrix with the given rows, over the rationals.
inline int rank(const std::vector<IntVec>& rows) {
  if (rows.empty()) return 0;
  const std::size_t n = rows[0].size();
  std::vector<RatVec> a;
  for (const IntVec& r : rows) {
    if (r.size() != n) throw DimensionMismatchError("rank");
    RatVec rr(n);
    for (std::size_t i = 0; i < n; ++i) rr[i] = Rat(r[i]);
    a.push_back(std::move(rr));
  }
  int rk = 0;
  std::size_t col = 0;
  for (std::size_t row = 0; row < a.size() && col < n; ++col) {
    std::size_t piv = row;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[row], a[piv]);
    const Rat p = a[row][col];
    for (std::size_t j = col; j < n; ++j) a[row][j] /= p;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rat f = a[i][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
    }
    ++row;
    ++rk;
  }
  return rk;
}

}  // namespace fanproj

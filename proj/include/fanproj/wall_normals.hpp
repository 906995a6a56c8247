#pragma once

#include <set>
#include <string>
#include <vector>

#include "fanproj/fan.hpp"
#include "fanproj/numeric.hpp"

namespace fanproj {

class DegenerateWallError : public std::runtime_error {
 public:
  explicit DegenerateWallError(const std::string& what) : std::runtime_error(what) {}
};

using NormalList = std::vector<Covector>;

/// Primitive covector vanishing on the span of the given rays, with the
/// first nonzero coordinate positive. Requires exactly dim - 1 linearly
/// independent rays, so the kernel of the evaluation map is a line.
inline Covector wall_normal(const Fan& fan, const std::vector<int>& ray_indices) {
  const int n = fan.dim;
  if (static_cast<int>(ray_indices.size()) != n - 1)
    throw DegenerateWallError("wall must have exactly dim - 1 generators");

  // Signed maximal minors of the (n-1) x n matrix whose rows are the
  // generators: m_j = (-1)^j det(matrix with column j deleted). Then
  // m(r) = 0 for every generator r by cofactor expansion.
  Covector m(n);
  bool all_zero = true;
  std::vector<IntVec> cols(n - 1, IntVec(n - 1));
  for (int j = 0; j < n; ++j) {
    int cc = 0;
    for (int c = 0; c < n; ++c) {
      if (c == j) continue;
      for (int r = 0; r < n - 1; ++r) cols[cc][r] = fan.rays[ray_indices[r]][c];
      ++cc;
    }
    Int d = determinant(cols);
    if (j % 2 == 1) d = -d;
    m[j] = std::move(d);
    all_zero = all_zero && m[j] == 0;
  }
  if (all_zero) throw DegenerateWallError("wall generators are linearly dependent");

  m = primitive(m).first;
  for (const Int& x : m) {
    if (x == 0) continue;
    if (x < 0) m = negate(m);
    break;
  }
  return m;
}

/// The deduplicated, lexicographically ordered list of wall normals of a
/// complete fan. The list spans the dual lattice rationally whenever the
/// fan is complete of dimension >= 2.
inline NormalList ordered_normals(const Fan& fan) {
  std::set<Covector, LexLess> dedup;
  for (const Wall& w : walls(fan)) dedup.insert(wall_normal(fan, w.ray_indices));
  NormalList out(dedup.begin(), dedup.end());
  if (rank(std::vector<IntVec>(out.begin(), out.end())) != fan.dim)
    throw DegenerateWallError("wall normals do not span the dual space");
  return out;
}

}  // namespace fanproj

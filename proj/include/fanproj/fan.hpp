#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fanproj/numeric.hpp"
#include "fanproj/ratlp.hpp"

namespace fanproj {

class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

class IncompleteFanError : public std::runtime_error {
 public:
  explicit IncompleteFanError(const std::string& what) : std::runtime_error(what) {}
};

class NotATwoConeError : public std::runtime_error {
 public:
  explicit NotATwoConeError(const std::string& what) : std::runtime_error(what) {}
};

class NonIntegralRelationError : public std::runtime_error {
 public:
  explicit NonIntegralRelationError(const std::string& what) : std::runtime_error(what) {}
};

/// A simplicial fan of pure dimension `dim`: primitive ray generators plus
/// maximal cones as sorted ray-index sets. Lower-dimensional cones are
/// derived on demand. Ray indices are append-only across subdivisions, so
/// logs can reference them stably.
struct Fan {
  int dim = 0;
  std::vector<LatticeVector> rays;
  std::vector<std::vector<int>> maxcones;

  bool operator==(const Fan&) const = default;
};

/// Codimension-one cone shared by exactly two maximal cones
/// ray_indices + {side_a} and ray_indices + {side_b}.
struct Wall {
  std::vector<int> ray_indices;  // sorted, size dim - 1
  int side_a = -1;               // side_a < side_b
  int side_b = -1;

  bool operator==(const Wall&) const = default;
};

/// The unique integral identity  r[side_a] + r[side_b] = sum coeffs[i] * r[ray_indices[i]]
/// across a wall of a smooth fan.
struct WallRelation {
  Wall wall;
  std::vector<Int> coeffs;
};

struct FVector {
  std::vector<long long> counts;  // counts[k-1] = number of k-dimensional cones

  bool operator==(const FVector&) const = default;
};

struct ValidationReport {
  bool smooth = false;
  bool complete = false;
  bool is_fan = false;
  std::vector<std::string> diagnostics;

  bool all_pass() const { return smooth && complete && is_fan; }
};

struct ValidateOptions {
  // The pairwise-face axiom check is quadratic in the number of maximal
  // cones; fans produced by star subdivision of a valid fan stay valid,
  // so pipelines may skip it. Skipping is recorded in the diagnostics.
  bool check_fan_axioms = true;
};

/// Builds a Fan after checking the structural invariants: primitive
/// distinct nonzero rays, sorted maximal cones of exactly `dim` distinct
/// in-range indices, no duplicate cones.
inline Fan make_fan(int dim, std::vector<LatticeVector> rays,
                    std::vector<std::vector<int>> maxcones) {
  if (dim < 2) throw InvariantViolation("fan dimension must be at least 2");
  const int nrays = static_cast<int>(rays.size());
  std::set<IntVec, LexLess> seen;
  for (int i = 0; i < nrays; ++i) {
    const LatticeVector& r = rays[i];
    if (static_cast<int>(r.size()) != dim)
      throw InvariantViolation("ray " + std::to_string(i) + " has wrong length");
    bool zero = true;
    for (const Int& x : r) zero = zero && x == 0;
    if (zero) throw InvariantViolation("ray " + std::to_string(i) + " is zero");
    if (!is_primitive(r))
      throw InvariantViolation("ray " + std::to_string(i) + " is not primitive: " + to_string(r));
    if (!seen.insert(r).second)
      throw InvariantViolation("duplicate ray " + to_string(r));
  }
  std::set<std::vector<int>> cone_set;
  for (std::size_t c = 0; c < maxcones.size(); ++c) {
    std::vector<int>& cone = maxcones[c];
    if (static_cast<int>(cone.size()) != dim)
      throw InvariantViolation("cone " + std::to_string(c) + " has size != dim");
    if (!std::is_sorted(cone.begin(), cone.end()))
      throw InvariantViolation("cone " + std::to_string(c) + " is not sorted");
    if (std::adjacent_find(cone.begin(), cone.end()) != cone.end())
      throw InvariantViolation("cone " + std::to_string(c) + " repeats an index");
    for (int i : cone)
      if (i < 0 || i >= nrays)
        throw InvariantViolation("cone " + std::to_string(c) + " references ray " + std::to_string(i));
    if (!cone_set.insert(cone).second)
      throw InvariantViolation("duplicate maximal cone");
  }
  return Fan{dim, std::move(rays), std::move(maxcones)};
}

namespace detail {

inline std::vector<IntVec> cone_columns(const Fan& fan, const std::vector<int>& cone) {
  std::vector<IntVec> cols;
  cols.reserve(cone.size());
  for (int i : cone) cols.push_back(fan.rays[i]);
  return cols;
}

// All k-subsets of each maximal cone, deduplicated, in sorted order.
inline std::set<std::vector<int>> subcones(const Fan& fan, int k) {
  std::set<std::vector<int>> out;
  std::vector<int> pick(k);
  for (const std::vector<int>& cone : fan.maxcones) {
    const int n = static_cast<int>(cone.size());
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      for (int i = 0; i < k; ++i) pick[i] = cone[idx[i]];
      out.insert(pick);
      int i = k - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace detail

/// All two-dimensional cones, as sorted index pairs.
inline std::vector<std::pair<int, int>> two_cones(const Fan& fan) {
  std::vector<std::pair<int, int>> out;
  for (const std::vector<int>& s : detail::subcones(fan, 2)) out.emplace_back(s[0], s[1]);
  return out;
}

/// Whether x lies in the cone spanned by the given generators
/// (exact membership: nonnegative coordinates in the generator basis).
inline bool cone_contains(const Fan& fan, const std::vector<int>& cone, const LatticeVector& x) {
  const auto coords = solve_exact(detail::cone_columns(fan, cone), x);
  if (!coords) return false;
  for (const Rat& c : *coords)
    if (c < 0) return false;
  return true;
}

/// All walls of a complete fan, sorted by their ray-index sets. Throws
/// IncompleteFanError when some codimension-one face does not have
/// exactly two adjacent maximal cones.
inline std::vector<Wall> walls(const Fan& fan) {
  std::map<std::vector<int>, std::vector<int>> facets;  // facet -> opposite rays
  std::vector<int> facet(fan.dim - 1);
  for (const std::vector<int>& cone : fan.maxcones) {
    for (int omit = 0; omit < fan.dim; ++omit) {
      facet.clear();
      for (int i = 0; i < fan.dim; ++i)
        if (i != omit) facet.push_back(cone[i]);
      facets[facet].push_back(cone[omit]);
    }
  }
  std::vector<Wall> out;
  out.reserve(facets.size());
  for (auto& [ray_indices, opposite] : facets) {
    if (opposite.size() != 2)
      throw IncompleteFanError("face " + std::to_string(ray_indices[0]) +
                               ".. has " + std::to_string(opposite.size()) +
                               " adjacent maximal cones");
    std::sort(opposite.begin(), opposite.end());
    out.push_back(Wall{ray_indices, opposite[0], opposite[1]});
  }
  return out;
}

/// Wall relation a + b = sum c_i r_i. The coefficients are integral
/// exactly when the adjacent cones are unimodular; the identity is
/// re-verified before returning.
inline WallRelation wall_relation(const Fan& fan, const Wall& wall) {
  std::vector<IntVec> cols = detail::cone_columns(fan, wall.ray_indices);
  cols.push_back(fan.rays[wall.side_a]);
  const auto x = solve_exact(cols, fan.rays[wall.side_b]);
  if (!x) throw NonIntegralRelationError("wall generators do not span the side ray");
  std::vector<Int> coeffs;
  coeffs.reserve(wall.ray_indices.size());
  for (std::size_t i = 0; i + 1 < x->size(); ++i) {
    const Rat& c = (*x)[i];
    if (boost::multiprecision::denominator(c) != 1)
      throw NonIntegralRelationError("non-integral wall relation (non-smooth cone)");
    coeffs.push_back(Int(boost::multiprecision::numerator(c)));
  }
  if (x->back() != -1)
    throw NonIntegralRelationError("side coefficient is not -1 (non-smooth cone)");
  // a + b = sum c_i r_i must hold coordinatewise.
  IntVec lhs = add(fan.rays[wall.side_a], fan.rays[wall.side_b]);
  for (int d = 0; d < fan.dim; ++d) {
    Int rhs = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      rhs += coeffs[i] * fan.rays[wall.ray_indices[i]][d];
    if (lhs[d] != rhs) throw NonIntegralRelationError("wall relation identity failed");
  }
  return WallRelation{wall, std::move(coeffs)};
}

inline FVector f_vector(const Fan& fan) {
  FVector f;
  f.counts.reserve(fan.dim);
  for (int k = 1; k <= fan.dim; ++k)
    f.counts.push_back(static_cast<long long>(detail::subcones(fan, k).size()));
  return f;
}

namespace detail {

// Separation test for the fan axiom: two maximal cones intersect in the
// cone on their shared generators iff some covector vanishes on the
// shared generators and takes strictly opposite signs on the remaining
// generators of each cone. Feasibility of the strict system is decided
// by the exact LP after scaling the strict inequalities to >= 1.
inline bool separable(const Fan& fan, const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  LinearSystem sys;
  sys.num_vars = fan.dim;
  const auto add_row = [&](int ray, int dir, bool strict) {
    LinearRow row;
    for (int d = 0; d < fan.dim; ++d)
      if (fan.rays[ray][d] != 0) row.coeffs[d] = Rat(dir * fan.rays[ray][d]);
    row.rhs = strict ? Rat(1) : Rat(0);
    sys.rows.push_back(std::move(row));
  };
  for (int i : shared) {
    add_row(i, 1, false);
    add_row(i, -1, false);
  }
  for (int i : a)
    if (!std::binary_search(shared.begin(), shared.end(), i)) add_row(i, 1, true);
  for (int i : b)
    if (!std::binary_search(shared.begin(), shared.end(), i)) add_row(i, -1, true);
  return std::holds_alternative<LpFeasible>(solve_feasibility(sys));
}

}  // namespace detail

/// Smoothness, completeness, and the fan axioms, in one report.
inline ValidationReport validate_fan(const Fan& fan, const ValidateOptions& opts = {}) {
  ValidationReport report;

  bool simplicial = true;
  report.smooth = true;
  for (std::size_t c = 0; c < fan.maxcones.size(); ++c) {
    const Int d = determinant(detail::cone_columns(fan, fan.maxcones[c]));
    if (d == 0) {
      simplicial = false;
      report.smooth = false;
      report.diagnostics.push_back("maximal cone " + std::to_string(c) + " is degenerate");
    } else if (d != 1 && d != -1) {
      report.smooth = false;
      report.diagnostics.push_back("maximal cone " + std::to_string(c) +
                                   " has determinant " + d.str());
    }
  }

  bool facets_paired = !fan.maxcones.empty();
  {
    std::map<std::vector<int>, int> count;
    std::vector<int> facet;
    for (const std::vector<int>& cone : fan.maxcones) {
      for (int omit = 0; omit < fan.dim; ++omit) {
        facet.clear();
        for (int i = 0; i < fan.dim; ++i)
          if (i != omit) facet.push_back(cone[i]);
        ++count[facet];
      }
    }
    for (const auto& [facet_indices, c] : count) {
      if (c != 2) {
        facets_paired = false;
        report.diagnostics.push_back("codimension-one face of ray set starting at index " +
                                     std::to_string(facet_indices[0]) + " lies in " +
                                     std::to_string(c) + " maximal cones");
        break;
      }
    }
  }

  report.is_fan = simplicial;
  if (!simplicial) {
    report.diagnostics.push_back("fan axiom check requires simplicial cones");
  } else if (!opts.check_fan_axioms) {
    report.is_fan = true;
    report.diagnostics.push_back("fan axiom check skipped (assumed valid by construction)");
  } else {
    for (std::size_t i = 0; i < fan.maxcones.size() && report.is_fan; ++i)
      for (std::size_t j = i + 1; j < fan.maxcones.size() && report.is_fan; ++j)
        if (!detail::separable(fan, fan.maxcones[i], fan.maxcones[j])) {
          report.is_fan = false;
          report.diagnostics.push_back("maximal cones " + std::to_string(i) + " and " +
                                       std::to_string(j) + " do not meet in a common face");
        }
  }

  report.complete = facets_paired && report.is_fan;
  return report;
}

/// Star subdivision at the sum of the generators of the two-cone {u, v}:
/// appends the ray r_u + r_v and splits every maximal cone containing
/// both u and v. Ray order is preserved; the new ray goes last.
inline std::pair<Fan, int> star_subdivide(const Fan& fan, int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= static_cast<int>(fan.rays.size()) ||
      v >= static_cast<int>(fan.rays.size()))
    throw NotATwoConeError("invalid ray pair");
  bool found = false;
  for (const std::vector<int>& cone : fan.maxcones) {
    if (std::binary_search(cone.begin(), cone.end(), u) &&
        std::binary_search(cone.begin(), cone.end(), v)) {
      found = true;
      break;
    }
  }
  if (!found)
    throw NotATwoConeError("{" + std::to_string(u) + "," + std::to_string(v) +
                           "} is not a two-cone of the fan");

  const LatticeVector s = add(fan.rays[u], fan.rays[v]);
  if (!is_primitive(s))
    throw InvariantViolation("subdivision ray " + to_string(s) +
                             " is not primitive (fan is not smooth at the two-cone)");
  for (const LatticeVector& r : fan.rays)
    if (r == s) throw InvariantViolation("subdivision ray already present: " + to_string(s));

  Fan out;
  out.dim = fan.dim;
  out.rays = fan.rays;
  out.rays.push_back(s);
  const int s_idx = static_cast<int>(out.rays.size()) - 1;
  out.maxcones.reserve(fan.maxcones.size() + 2);
  const auto replaced = [&](const std::vector<int>& cone, int drop) {
    std::vector<int> c;
    c.reserve(cone.size());
    for (int i : cone)
      if (i != drop) c.push_back(i);
    c.push_back(s_idx);  // indices below s_idx stay sorted; s_idx is largest
    return c;
  };
  for (const std::vector<int>& cone : fan.maxcones) {
    if (std::binary_search(cone.begin(), cone.end(), u) &&
        std::binary_search(cone.begin(), cone.end(), v)) {
      out.maxcones.push_back(replaced(cone, u));
      out.maxcones.push_back(replaced(cone, v));
    } else {
      out.maxcones.push_back(cone);
    }
  }
  return {std::move(out), s_idx};
}

/// Whether every maximal cone of `fine` lies inside some maximal cone of
/// `coarse` (all generators in one cone, by exact membership).
inline bool refines(const Fan& fine, const Fan& coarse) {
  for (const std::vector<int>& fc : fine.maxcones) {
    bool inside = false;
    for (const std::vector<int>& cc : coarse.maxcones) {
      bool all = true;
      for (int g : fc) {
        if (!cone_contains(coarse, cc, fine.rays[g])) {
          all = false;
          break;
        }
      }
      if (all) {
        inside = true;
        break;
      }
    }
    if (!inside) return false;
  }
  return true;
}

}  // namespace fanproj

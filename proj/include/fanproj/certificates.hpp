#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fanproj/fan.hpp"
#include "fanproj/numeric.hpp"
#include "fanproj/ratlp.hpp"
#include "fanproj/sign_adapt.hpp"
#include "fanproj/wall_normals.hpp"

namespace fanproj {

class MissingRayValueError : public std::runtime_error {
 public:
  explicit MissingRayValueError(const std::string& what) : std::runtime_error(what) {}
};

class HNotConvexError : public std::runtime_error {
 public:
  explicit HNotConvexError(const std::string& what) : std::runtime_error(what) {}
};

class CertificateFailedError : public std::runtime_error {
 public:
  explicit CertificateFailedError(const std::string& what) : std::runtime_error(what) {}
};

/// Piecewise-linear function on a fan, recorded by its value at each
/// primitive ray generator (index-aligned with the fan's ray list).
struct SupportFunction {
  std::vector<Rat> values;

  bool operator==(const SupportFunction&) const = default;
};

struct BendReport {
  std::vector<std::pair<Wall, Rat>> bends;  // in walls(fan) order
  Rat min_bend;
  std::set<Rat> distinct_values;
  bool all_positive = false;
};

enum class WallKind { Inherited, Interior };

struct WallClass {
  Wall wall;
  WallKind kind = WallKind::Interior;
};

/// Nonnegative multipliers over walls (identified by their generator
/// index sets) whose weighted sum of bend functionals vanishes
/// identically; witnesses that no strictly convex support function
/// exists. Only strictly positive entries are stored.
struct FarkasCertificate {
  std::vector<std::pair<std::vector<int>, Rat>> multipliers;
};

namespace detail {

inline void require_values(const Fan& fan, const SupportFunction& h) {
  if (h.values.size() != fan.rays.size())
    throw MissingRayValueError("support function has " + std::to_string(h.values.size()) +
                               " values for " + std::to_string(fan.rays.size()) + " rays");
}

// Bend via the wall relation: sum c_i h(r_i) - h(a) - h(b).
inline Rat bend_via_relation(const WallRelation& rel, const SupportFunction& h) {
  Rat out = -h.values[rel.wall.side_a] - h.values[rel.wall.side_b];
  for (std::size_t i = 0; i < rel.coeffs.size(); ++i)
    out += Rat(rel.coeffs[i]) * h.values[rel.wall.ray_indices[i]];
  return out;
}

// The linear form agreeing with h on the maximal cone spanned by the
// wall generators and the given side ray.
inline RatVec linear_piece(const Fan& fan, const Wall& wall, int side, const SupportFunction& h) {
  std::vector<int> gens = wall.ray_indices;
  gens.push_back(side);
  std::vector<IntVec> cols(fan.dim, IntVec(fan.dim));
  RatVec target(fan.dim);
  for (int i = 0; i < fan.dim; ++i) {
    for (int j = 0; j < fan.dim; ++j) cols[j][i] = fan.rays[gens[i]][j];
    target[i] = h.values[gens[i]];
  }
  const auto m = solve_exact(cols, target);
  if (!m) throw std::logic_error("linear piece solve failed on a maximal cone");
  return *m;
}

// Bend via the two linear pieces: (m_+ - m_-)(b), where m_+ lives on the
// cone containing a = rays[side_a] and b = rays[side_b].
inline Rat bend_via_pieces(const Fan& fan, const Wall& wall, const SupportFunction& h) {
  const RatVec mp = linear_piece(fan, wall, wall.side_a, h);
  const RatVec mm = linear_piece(fan, wall, wall.side_b, h);
  Rat out = 0;
  for (int j = 0; j < fan.dim; ++j) out += (mp[j] - mm[j]) * Rat(fan.rays[wall.side_b][j]);
  return out;
}

}  // namespace detail

/// Exact bend of h across the wall, evaluated through the wall relation
/// and through the difference of adjacent linear pieces; the two routes
/// must agree.
inline Rat bend(const Fan& fan, const Wall& wall, const SupportFunction& h) {
  detail::require_values(fan, h);
  const Rat via_relation = detail::bend_via_relation(wall_relation(fan, wall), h);
  const Rat via_pieces = detail::bend_via_pieces(fan, wall, h);
  if (via_relation != via_pieces)
    throw std::logic_error("bend formulas disagree across a wall");
  return via_relation;
}

inline BendReport all_bends(const Fan& fan, const SupportFunction& h) {
  detail::require_values(fan, h);
  BendReport report;
  for (const Wall& w : walls(fan)) {
    Rat b = bend(fan, w, h);
    report.distinct_values.insert(b);
    report.bends.emplace_back(w, std::move(b));
  }
  if (report.bends.empty()) throw std::logic_error("complete fan without walls");
  report.min_bend = *report.distinct_values.begin();
  report.all_positive = report.min_bend > 0;
  return report;
}

inline std::pair<bool, BendReport> verify_ample(const Fan& fan, const SupportFunction& h) {
  BendReport report = all_bends(fan, h);
  const bool ok = report.all_positive;
  return {ok, std::move(report)};
}

/// A wall is inherited when some normal vanishes on all its generators,
/// interior otherwise.
inline std::vector<WallClass> classify_walls(const Fan& fan, const NormalList& normals) {
  std::vector<WallClass> out;
  for (const Wall& w : walls(fan)) {
    WallKind kind = WallKind::Interior;
    for (const Covector& m : normals) {
      bool vanishes = true;
      for (int g : w.ray_indices)
        if (pairing(m, fan.rays[g]) != 0) {
          vanishes = false;
          break;
        }
      if (vanishes) {
        kind = WallKind::Inherited;
        break;
      }
    }
    out.push_back(WallClass{w, kind});
  }
  return out;
}

/// Support function h(r) = -sum_i |m_i(r)| of the arrangement. On a fan
/// adapted to all the normals, its bends are positive on inherited walls
/// and zero on interior walls; this dichotomy is verified before
/// returning.
inline SupportFunction arrangement_h(const NormalList& normals, const Fan& fan) {
  SupportFunction h;
  h.values.reserve(fan.rays.size());
  for (const LatticeVector& r : fan.rays) {
    Int total = 0;
    for (const Covector& m : normals) total += abs(pairing(m, r));
    h.values.push_back(Rat(-total));
  }
  for (const WallClass& wc : classify_walls(fan, normals)) {
    const Rat b = bend(fan, wc.wall, h);
    if (wc.kind == WallKind::Inherited && b <= 0)
      throw HNotConvexError("inherited wall with non-positive bend (fan not adapted?)");
    if (wc.kind == WallKind::Interior && b != 0)
      throw HNotConvexError("interior wall with nonzero bend (fan not adapted?)");
  }
  return h;
}

/// Support function vanishing on the rays of the original fan and bumped
/// by beta^j at the ray inserted in step j: g(s) = g(u) + g(v) + beta^j.
inline SupportFunction relative_g(const BlowupLog& log, const Fan& final_fan, const Rat& beta) {
  SupportFunction g;
  g.values.assign(final_fan.rays.size(), Rat(0));
  Rat bump = 1;
  for (std::size_t j = 0; j < log.steps.size(); ++j) {
    const BlowupStep& st = log.steps[j];
    bump *= beta;
    if (st.s_idx < 0 || st.s_idx >= static_cast<int>(g.values.size()) || st.u_idx < 0 ||
        st.v_idx < 0 || st.u_idx >= st.s_idx || st.v_idx >= st.s_idx)
      throw InvariantViolation("blow-up log indices out of range for the final fan");
    g.values[st.s_idx] = g.values[st.u_idx] + g.values[st.v_idx] + bump;
  }
  return g;
}

namespace detail {

// Whether the wall's relative interior lies inside the interior of a
// maximal cone of sigma, tested at the barycenter (sum of generators):
// some containing sigma-cone must give all coordinates > 0.
inline bool interior_to(const Fan& sigma, const Fan& fine, const Wall& wall) {
  IntVec bary(fine.dim, Int(0));
  for (int g : wall.ray_indices) bary = add(bary, fine.rays[g]);
  for (const std::vector<int>& cone : sigma.maxcones) {
    const auto coords = solve_exact(cone_columns(sigma, cone), bary);
    if (!coords) continue;
    bool positive = true;
    for (const Rat& c : *coords) positive = positive && c > 0;
    if (positive) return true;
  }
  return false;
}

}  // namespace detail

/// The sandwich certificate h + eps*g on gamma: h from the arrangement,
/// g strictly convex relative to sigma with geometric bumps (beta halved
/// until the sigma-interior bends are positive), eps half the Farkas-free
/// margin min over inherited walls of bend(h) / (1 + |bend(g)|).
inline SupportFunction certify_sandwich(const Fan& sigma, const Fan& gamma, const BlowupLog& log,
                                        const NormalList& normals) {
  if (replay(sigma, log) != gamma)
    throw InvariantViolation("blow-up log does not replay to the target fan");

  const SupportFunction h = arrangement_h(normals, gamma);

  const std::vector<Wall> wall_list = walls(gamma);
  std::vector<bool> sigma_interior(wall_list.size());
  for (std::size_t i = 0; i < wall_list.size(); ++i)
    sigma_interior[i] = detail::interior_to(sigma, gamma, wall_list[i]);

  const Rat beta_min = Rat(Int(1), Int(1) << 64);
  Rat beta(1, 2);
  SupportFunction g;
  for (;;) {
    g = relative_g(log, gamma, beta);
    bool ok = true;
    for (std::size_t i = 0; i < wall_list.size() && ok; ++i)
      if (sigma_interior[i]) ok = bend(gamma, wall_list[i], g) > 0;
    if (ok) break;
    beta /= 2;
    if (beta < beta_min)
      throw CertificateFailedError("relative support function stayed non-convex down to the bump floor");
  }

  Rat eps0 = 1;
  bool have_inherited = false;
  for (const WallClass& wc : classify_walls(gamma, normals)) {
    if (wc.kind != WallKind::Inherited) continue;
    const Rat margin = bend(gamma, wc.wall, h) / (1 + abs(bend(gamma, wc.wall, g)));
    if (!have_inherited || margin < eps0) eps0 = margin;
    have_inherited = true;
  }
  const Rat eps = eps0 / 2;

  SupportFunction h_eps;
  h_eps.values.reserve(h.values.size());
  for (std::size_t i = 0; i < h.values.size(); ++i)
    h_eps.values.push_back(h.values[i] + eps * g.values[i]);
  if (!verify_ample(gamma, h_eps).first)
    throw CertificateFailedError("sandwich support function is not strictly convex");
  return h_eps;
}

inline bool verify_farkas(const Fan& fan, const FarkasCertificate& cert) {
  std::map<std::vector<int>, WallRelation> by_indices;
  for (const Wall& w : walls(fan)) by_indices.emplace(w.ray_indices, wall_relation(fan, w));

  std::vector<Rat> functional(fan.rays.size(), Rat(0));
  bool some_positive = false;
  for (const auto& [indices, lambda] : cert.multipliers) {
    if (lambda < 0) return false;
    if (lambda == 0) continue;
    const auto it = by_indices.find(indices);
    if (it == by_indices.end()) return false;
    some_positive = true;
    const WallRelation& rel = it->second;
    functional[rel.wall.side_a] -= lambda;
    functional[rel.wall.side_b] -= lambda;
    for (std::size_t i = 0; i < rel.coeffs.size(); ++i)
      functional[rel.wall.ray_indices[i]] += lambda * Rat(rel.coeffs[i]);
  }
  if (!some_positive) return false;
  for (const Rat& c : functional)
    if (c != 0) return false;
  return true;
}

/// Decides projectivity by the exact feasibility system bend(H) >= 1
/// over all walls. Returns a verified ample support function or a
/// verified Farkas certificate; homogeneity of the bends makes the
/// closed system equivalent to strict positivity.
inline std::variant<SupportFunction, FarkasCertificate> certify_lp(const Fan& fan) {
  const std::vector<Wall> wall_list = walls(fan);
  LinearSystem sys;
  sys.num_vars = static_cast<int>(fan.rays.size());
  for (const Wall& w : wall_list) {
    const WallRelation rel = wall_relation(fan, w);
    LinearRow row;
    row.coeffs[w.side_a] = -1;
    row.coeffs[w.side_b] = -1;
    for (std::size_t i = 0; i < rel.coeffs.size(); ++i)
      if (rel.coeffs[i] != 0) row.coeffs[w.ray_indices[i]] = Rat(rel.coeffs[i]);
    row.rhs = 1;
    sys.rows.push_back(std::move(row));
  }

  const LpOutcome outcome = solve_feasibility(sys);
  if (const auto* feasible = std::get_if<LpFeasible>(&outcome)) {
    SupportFunction h{feasible->x};
    const auto [ok, report] = verify_ample(fan, h);
    if (!ok || report.min_bend < 1)
      throw std::logic_error("LP-feasible support function failed verification");
    return h;
  }

  const auto& lambda = std::get<LpInfeasible>(outcome).lambda;
  FarkasCertificate cert;
  for (std::size_t i = 0; i < wall_list.size(); ++i)
    if (lambda[i] != 0) cert.multipliers.emplace_back(wall_list[i].ray_indices, lambda[i]);
  if (!verify_farkas(fan, cert))
    throw std::logic_error("LP Farkas certificate failed verification");
  return cert;
}

}  // namespace fanproj

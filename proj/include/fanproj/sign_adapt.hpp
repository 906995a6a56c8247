#pragma once

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fanproj/fan.hpp"
#include "fanproj/numeric.hpp"
#include "fanproj/wall_normals.hpp"

namespace fanproj {

class EmptyCandidatesError : public std::runtime_error {
 public:
  explicit EmptyCandidatesError(const std::string& what) : std::runtime_error(what) {}
};

/// An m-bad two-cone: generators with opposite-sign pairings against m.
/// Oriented so that r_u precedes r_v in lex order on the vectors.
struct BadCone {
  int u = -1;
  int v = -1;
  Int weight;  // |m(r_u)| + |m(r_v)|
};

struct BlowupStep {
  int step = 0;       // 1-based ordinal, global across the whole run
  Covector normal;    // governing normal m_j
  LatticeVector u;    // generator coordinates at selection time
  LatticeVector v;
  LatticeVector s;    // u + v
  int u_idx = -1;
  int v_idx = -1;
  int s_idx = -1;

  bool operator==(const BlowupStep&) const = default;
};

struct PerNormalCount {
  Covector normal;
  int count = 0;

  bool operator==(const PerNormalCount&) const = default;
};

struct BlowupLog {
  std::vector<BlowupStep> steps;
  std::vector<PerNormalCount> per_normal;

  bool operator==(const BlowupLog&) const = default;
};

/// Per-iteration (max weight, number of bad cones at max weight); the
/// run is valid iff this sequence strictly lexicographically decreases
/// to the final entry (0, 0).
using MuTrace = std::vector<std::pair<Int, long long>>;

struct AdaptOptions {
  // Re-derives the bad set from scratch after every step and asserts it
  // matches the incremental update. For tests; quadratic cost per step.
  bool paranoid_rescan = false;
  // Called after every subdivision with the new fan and the step record.
  std::function<void(const Fan&, const BlowupStep&)> observer;
  // adapt_all only: evaluated after each normal finishes; true halts the
  // run early (the fan is then adapted only to the processed prefix).
  std::function<bool(const Fan&)> stop_after_normal;
  // Ordinal assigned to the first step of this run; adapt_all uses this to
  // keep numbering global, so observers see the same ordinals as the log.
  int first_step = 1;
};

struct AdaptResult {
  Fan fan;
  std::vector<BlowupStep> steps;
  MuTrace trace;
};

struct AdaptAllResult {
  Fan fan;
  BlowupLog log;
  NormalList normals;
  bool stopped_early = false;
};

namespace detail {

inline BadCone orient_bad(const Fan& fan, int i, int j, Int weight) {
  if (lex_compare(fan.rays[i], fan.rays[j]) > 0) std::swap(i, j);
  return BadCone{i, j, std::move(weight)};
}

inline std::optional<Int> bad_weight(const Fan& fan, const Covector& m, int i, int j) {
  const Int pi = pairing(m, fan.rays[i]);
  const Int pj = pairing(m, fan.rays[j]);
  if (pi * pj >= 0) return std::nullopt;
  return abs(pi) + abs(pj);
}

// (max weight, count at max); (0, 0) when no bad cones remain.
inline std::pair<Int, long long> mu_of(const Fan& fan, const Covector& m,
                                       const std::set<std::pair<int, int>>& bad_pairs) {
  Int w_max = 0;
  long long count = 0;
  for (const auto& [i, j] : bad_pairs) {
    const Int w = *bad_weight(fan, m, i, j);
    if (w > w_max) {
      w_max = w;
      count = 1;
    } else if (w == w_max) {
      ++count;
    }
  }
  if (w_max == 0) count = 0;
  return {std::move(w_max), count};
}

}  // namespace detail

/// All m-bad two-cones with weights, sorted by the oriented generator
/// pair in lex order.
inline std::vector<BadCone> find_bad(const Fan& fan, const Covector& m) {
  std::vector<BadCone> out;
  for (const auto& [i, j] : two_cones(fan))
    if (auto w = detail::bad_weight(fan, m, i, j))
      out.push_back(detail::orient_bad(fan, i, j, std::move(*w)));
  std::sort(out.begin(), out.end(), [&](const BadCone& a, const BadCone& b) {
    const auto c = lex_compare(fan.rays[a.u], fan.rays[b.u]);
    if (c != 0) return c < 0;
    return lex_compare(fan.rays[a.v], fan.rays[b.v]) < 0;
  });
  return out;
}

inline bool is_adapted(const Fan& fan, const Covector& m) {
  for (const auto& [i, j] : two_cones(fan))
    if (detail::bad_weight(fan, m, i, j)) return false;
  return true;
}

/// Among maximal-weight candidates, the one with the lexicographically
/// least oriented generator pair (first component, then second).
inline BadCone select_bad(const std::vector<BadCone>& candidates, const Fan& fan) {
  if (candidates.empty()) throw EmptyCandidatesError("no bad two-cones to select from");
  const BadCone* best = &candidates[0];
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const BadCone& c = candidates[k];
    if (c.weight > best->weight) {
      best = &c;
      continue;
    }
    if (c.weight < best->weight) continue;
    auto cmp = lex_compare(fan.rays[c.u], fan.rays[best->u]);
    if (cmp == 0) cmp = lex_compare(fan.rays[c.v], fan.rays[best->v]);
    if (cmp < 0) best = &c;
  }
  return *best;
}

/// Star-subdivides maximal-weight bad cones until the fan is m-adapted.
/// Steps are numbered from opts.first_step. The incremental bad-set
/// update relies on two-cones: after subdividing {u,v} into s, every old
/// two-cone except {u,v} survives and the only new ones contain s.
inline AdaptResult adapt(const Fan& fan, const Covector& m, const AdaptOptions& opts = {}) {
  AdaptResult result;
  result.fan = fan;

  std::set<std::pair<int, int>> bad_pairs;
  for (const auto& [i, j] : two_cones(result.fan))
    if (detail::bad_weight(result.fan, m, i, j)) bad_pairs.insert({i, j});

  result.trace.push_back(detail::mu_of(result.fan, m, bad_pairs));

  while (!bad_pairs.empty()) {
    std::vector<BadCone> candidates;
    candidates.reserve(bad_pairs.size());
    for (const auto& [i, j] : bad_pairs)
      candidates.push_back(
          detail::orient_bad(result.fan, i, j, *detail::bad_weight(result.fan, m, i, j)));
    const BadCone chosen = select_bad(candidates, result.fan);

    BlowupStep st;
    st.step = opts.first_step + static_cast<int>(result.steps.size());
    st.normal = m;
    st.u = result.fan.rays[chosen.u];
    st.v = result.fan.rays[chosen.v];
    st.s = add(st.u, st.v);
    st.u_idx = chosen.u;
    st.v_idx = chosen.v;

    auto [next, s_idx] = star_subdivide(result.fan, chosen.u, chosen.v);
    st.s_idx = s_idx;
    result.fan = std::move(next);

    bad_pairs.erase({std::min(chosen.u, chosen.v), std::max(chosen.u, chosen.v)});
    std::set<int> neighbors;
    for (const std::vector<int>& cone : result.fan.maxcones)
      if (std::binary_search(cone.begin(), cone.end(), s_idx))
        for (int i : cone)
          if (i != s_idx) neighbors.insert(i);
    for (int i : neighbors)
      if (detail::bad_weight(result.fan, m, i, s_idx)) bad_pairs.insert({i, s_idx});

    if (opts.paranoid_rescan) {
      std::set<std::pair<int, int>> full;
      for (const auto& [i, j] : two_cones(result.fan))
        if (detail::bad_weight(result.fan, m, i, j)) full.insert({i, j});
      if (full != bad_pairs)
        throw std::logic_error("incremental bad set diverged from full rescan");
    }

    result.trace.push_back(detail::mu_of(result.fan, m, bad_pairs));
    const auto& prev = result.trace[result.trace.size() - 2];
    const auto& cur = result.trace.back();
    if (!(cur.first < prev.first || (cur.first == prev.first && cur.second < prev.second)))
      throw std::logic_error("termination measure failed to decrease");

    result.steps.push_back(st);
    if (opts.observer) opts.observer(result.fan, result.steps.back());
  }

  if (result.trace.back() != std::make_pair(Int(0), 0LL))
    throw std::logic_error("adaptation loop ended with nonzero measure");
  return result;
}

/// Sequential adaptation to every normal of the ORIGINAL fan, in their
/// lex order, with globally renumbered steps. Adaptation to all processed
/// normals is re-verified at the end.
inline AdaptAllResult adapt_all(const Fan& fan, const AdaptOptions& opts = {}) {
  AdaptAllResult result;
  result.normals = ordered_normals(fan);
  result.fan = fan;

  AdaptOptions per_normal_opts = opts;
  std::size_t processed = 0;
  for (const Covector& m : result.normals) {
    per_normal_opts.first_step = static_cast<int>(result.log.steps.size()) + 1;
    AdaptResult r = adapt(result.fan, m, per_normal_opts);
    for (BlowupStep& st : r.steps) result.log.steps.push_back(std::move(st));
    result.log.per_normal.push_back({m, static_cast<int>(r.steps.size())});
    result.fan = std::move(r.fan);
    ++processed;
    if (opts.stop_after_normal && processed < result.normals.size() &&
        opts.stop_after_normal(result.fan)) {
      result.stopped_early = true;
      break;
    }
  }

  for (std::size_t j = 0; j < processed; ++j)
    if (!is_adapted(result.fan, result.normals[j]))
      throw std::logic_error("final fan lost adaptation to a processed normal");
  return result;
}

/// Re-executes a blow-up log from the starting fan, checking every
/// recorded generator and index against the evolving fan.
inline Fan replay(const Fan& sigma, const BlowupLog& log) {
  Fan cur = sigma;
  for (const BlowupStep& st : log.steps) {
    const auto where = "replay step " + std::to_string(st.step);
    if (st.u_idx < 0 || st.v_idx < 0 || st.u_idx >= static_cast<int>(cur.rays.size()) ||
        st.v_idx >= static_cast<int>(cur.rays.size()))
      throw InvariantViolation(where + ": ray index out of range");
    if (cur.rays[st.u_idx] != st.u || cur.rays[st.v_idx] != st.v)
      throw InvariantViolation(where + ": recorded generators do not match the fan");
    auto [next, s_idx] = star_subdivide(cur, st.u_idx, st.v_idx);
    if (s_idx != st.s_idx || next.rays[s_idx] != st.s)
      throw InvariantViolation(where + ": inserted ray does not match the record");
    cur = std::move(next);
  }
  return cur;
}

}  // namespace fanproj

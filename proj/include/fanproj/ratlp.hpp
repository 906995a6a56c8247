#pragma once

#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fanproj/numeric.hpp"

namespace fanproj {

/// One inequality  sum coeffs[j] * x_j >= rhs  over free rational variables.
struct LinearRow {
  std::map<int, Rat> coeffs;
  Rat rhs;
};

struct LinearSystem {
  std::vector<LinearRow> rows;
  int num_vars = 0;
};

struct LpFeasible {
  RatVec x;  // one value per variable, every row satisfied exactly
};

struct LpInfeasible {
  RatVec lambda;  // one multiplier per row: lambda >= 0, lambda^T A = 0, lambda^T b > 0
};

using LpOutcome = std::variant<LpFeasible, LpInfeasible>;

namespace detail {

inline void check_system(const LinearSystem& sys) {
  for (const LinearRow& row : sys.rows)
    for (const auto& [j, c] : row.coeffs)
      if (j < 0 || j >= sys.num_vars)
        throw std::invalid_argument("LinearSystem: variable index out of range");
}

}  // namespace detail

/// Decides feasibility of { x : A x >= b } by phase-1 simplex over exact
/// rationals with Bland's least-index rule (no cycling, fully
/// deterministic). Free variables are split x = u - w; each row gets a
/// slack and an artificial variable. On infeasibility the simplex
/// multipliers of the optimal phase-1 basis yield the Farkas certificate.
/// Both outcomes are re-verified against the input before returning.
inline LpOutcome solve_feasibility(const LinearSystem& sys) {
  detail::check_system(sys);
  const int m = static_cast<int>(sys.rows.size());
  const int k = sys.num_vars;
  if (m == 0) return LpFeasible{RatVec(static_cast<std::size_t>(k), Rat(0))};

  // Columns: u_0..u_{k-1}, w_0..w_{k-1}, s_0..s_{m-1}, z_0..z_{m-1}.
  const int cu = 0, cw = k, cs = 2 * k, cz = 2 * k + m;
  const int ncols = 2 * k + 2 * m;

  // sign[i] flips row i so its right-hand side is nonnegative.
  std::vector<int> sign(m, 1);
  std::vector<RatVec> t(m + 1, RatVec(ncols + 1, Rat(0)));
  for (int i = 0; i < m; ++i) {
    const LinearRow& row = sys.rows[i];
    if (row.rhs < 0) sign[i] = -1;
    for (const auto& [j, c] : row.coeffs) {
      t[i][cu + j] = sign[i] * c;
      t[i][cw + j] = -sign[i] * c;
    }
    t[i][cs + i] = Rat(-sign[i]);
    t[i][cz + i] = 1;
    t[i][ncols] = sign[i] * row.rhs;
  }
  // Objective row: reduced costs for minimizing sum of artificials,
  // with the artificial basis priced out. t[m][ncols] holds -objective.
  for (int j = 0; j <= ncols; ++j) {
    Rat s = 0;
    for (int i = 0; i < m; ++i) s += t[i][j];
    t[m][j] = ((j >= cz && j < cz + m) ? Rat(1) : Rat(0)) - s;
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = cz + i;

  const auto pivot = [&](int pr, int pc) {
    const Rat p = t[pr][pc];
    for (int j = 0; j <= ncols; ++j) t[pr][j] /= p;
    for (int i = 0; i <= m; ++i) {
      if (i == pr || t[i][pc] == 0) continue;
      const Rat f = t[i][pc];
      for (int j = 0; j <= ncols; ++j) t[i][j] -= f * t[pr][j];
    }
    basis[pr] = pc;
  };

  for (;;) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (t[m][j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    Rat best;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      const Rat ratio = t[i][ncols] / t[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0)
      throw std::logic_error("ratlp: phase-1 objective unbounded");
    pivot(leave, enter);
  }

  const Rat objective = -t[m][ncols];
  if (objective == 0) {
    RatVec x(static_cast<std::size_t>(k), Rat(0));
    for (int i = 0; i < m; ++i) {
      const int b = basis[i];
      if (b >= cu && b < cu + k) x[b - cu] += t[i][ncols];
      if (b >= cw && b < cw + k) x[b - cw] -= t[i][ncols];
    }
    for (const LinearRow& row : sys.rows) {
      Rat lhs = 0;
      for (const auto& [j, c] : row.coeffs) lhs += c * x[j];
      if (lhs < row.rhs) throw std::logic_error("ratlp: claimed solution violates a row");
    }
    return LpFeasible{std::move(x)};
  }

  // Simplex multipliers: y_i = 1 - reduced cost of artificial i.
  RatVec lambda(m);
  Rat lmax = 0;
  for (int i = 0; i < m; ++i) {
    lambda[i] = sign[i] * (Rat(1) - t[m][cz + i]);
    if (lambda[i] < 0) throw std::logic_error("ratlp: negative Farkas multiplier");
    if (lambda[i] > lmax) lmax = lambda[i];
  }
  if (lmax == 0) throw std::logic_error("ratlp: zero Farkas certificate");
  for (Rat& l : lambda) l /= lmax;
  RatVec combo(static_cast<std::size_t>(k), Rat(0));
  Rat rhs = 0;
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, c] : sys.rows[i].coeffs) combo[j] += lambda[i] * c;
    rhs += lambda[i] * sys.rows[i].rhs;
  }
  for (const Rat& c : combo)
    if (c != 0) throw std::logic_error("ratlp: Farkas combination is not the zero functional");
  if (rhs <= 0) throw std::logic_error("ratlp: Farkas combination has nonpositive rhs");
  return LpInfeasible{std::move(lambda)};
}

}  // namespace fanproj

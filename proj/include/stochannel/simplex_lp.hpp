#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "stochannel/error.hpp"

namespace stochannel::detail {

inline constexpr double kPivotTol = 1e-12;

struct Phase1Result {
  double infeasibility = 0.0;        // optimal sum of artificials
  std::vector<double> solution;      // structural variable values
};

/// Dense phase-1 simplex for the feasibility of A x = b, x >= 0: one
/// artificial variable per row, minimize their sum under Bland's rule.
/// The system is feasible exactly when the optimum is zero; callers treat
/// small positive optima as rounding noise via their own tolerance.
/// Instances here are tiny (at most n+1 rows, k structural columns), so a
/// plain dense tableau is the whole implementation.
inline Phase1Result phase1_feasibility(const std::vector<std::vector<double>>& a,
                                       const std::vector<double>& b) {
  const std::size_t rows = a.size();
  const std::size_t nv = rows == 0 ? 0 : a.front().size();
  if (rows == 0) return Phase1Result{0.0, {}};

  // Tableau: structural columns, then one artificial per row.
  std::vector<std::vector<double>> t(rows, std::vector<double>(nv + rows, 0.0));
  std::vector<double> rhs(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nv; ++j) t[r][j] = sign * a[r][j];
    t[r][nv + r] = 1.0;
    rhs[r] = sign * b[r];
  }

  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) basis[r] = nv + r;

  // Reduced costs for min(sum of artificials), canonicalized against the
  // all-artificial starting basis.
  std::vector<double> rc(nv + rows, 0.0);
  for (std::size_t j = 0; j < nv; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += t[r][j];
    rc[j] = -s;
  }

  const std::size_t max_pivots = 200 * (nv + rows + 1);
  for (std::size_t step = 0; step < max_pivots; ++step) {
    // Bland: entering column = lowest index with negative reduced cost.
    std::size_t enter = nv + rows;
    for (std::size_t j = 0; j < nv + rows; ++j) {
      if (rc[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter == nv + rows) break;  // optimal

    // Ratio test; ties broken by smallest basic variable index (Bland).
    std::size_t leave = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      if (t[r][enter] > kPivotTol) {
        const double ratio = rhs[r] / t[r][enter];
        if (ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol && (leave == rows || basis[r] < basis[leave]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave == rows) break;  // defensive; phase-1 objective is bounded

    const double piv = t[leave][enter];
    for (double& x : t[leave]) x /= piv;
    rhs[leave] /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double f = t[r][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < nv + rows; ++j) t[r][j] -= f * t[leave][j];
      rhs[r] -= f * rhs[leave];
      if (rhs[r] < 0.0 && rhs[r] > -kPivotTol) rhs[r] = 0.0;
    }
    const double f = rc[enter];
    for (std::size_t j = 0; j < nv + rows; ++j) rc[j] -= f * t[leave][j];
    basis[leave] = enter;
  }

  Phase1Result out;
  out.solution.assign(nv, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < nv) {
      out.solution[basis[r]] = rhs[r];
    } else {
      out.infeasibility += rhs[r];
    }
  }
  return out;
}

}  // namespace stochannel::detail

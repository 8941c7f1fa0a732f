#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "stochannel/channel.hpp"
#include "stochannel/dist.hpp"
#include "stochannel/error.hpp"

namespace stochannel {

/// Certified capacity estimate. capacity equals lower_bound and is achieved
/// by argmax_input, so mutual_information(argmax_input, channel) reproduces
/// it; upper_bound - lower_bound <= tol on successful termination.
struct CapacityResult {
  double capacity = 0.0;  // bits
  Dist argmax_input;
  std::size_t iterations = 0;
  double lower_bound = 0.0;  // bits
  double upper_bound = 0.0;  // bits
};

/// H(sum_i r_i x_i) - sum_i r_i H(x_i): the height of the entropy surface
/// above the chord through the mixed points. Nonnegative by concavity,
/// strictly positive for genuine mixtures of distinct points.
inline double entropy_gap(const Dist& weights, const std::vector<Dist>& points) {
  const Dist mix = convex_combine(weights, points);
  double avg = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) avg += weights[j] * entropy(points[j]);
  return entropy(mix) - avg;
}

namespace detail {

/// KL divergence D(row || q) in bits over the given column subset; terms
/// with row[j] = 0 contribute zero.
inline double kl_bits(const std::vector<double>& row, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] > 0.0) d += row[j] * (std::log2(row[j]) - std::log2(q[j]));
  }
  return d;
}

}  // namespace detail

namespace detail {

/// Shared scratch for the capacity iteration: the channel restricted to its
/// live output columns, plus per-input row entropies.
struct BaWorkspace {
  std::vector<std::vector<double>> rows;  // live columns only
  std::vector<double> row_entropy;

  explicit BaWorkspace(const Channel& c) {
    // Drop all-zero output columns up front; with inputs kept positive every
    // remaining column has positive mass, so the divergences stay finite.
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < c.output_count(); ++j) {
      for (std::size_t i = 0; i < c.input_count(); ++i) {
        if (c.at(i, j) > 0.0) {
          cols.push_back(j);
          break;
        }
      }
    }
    rows.assign(c.input_count(), std::vector<double>(cols.size()));
    row_entropy.assign(c.input_count(), 0.0);
    for (std::size_t i = 0; i < c.input_count(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) rows[i][j] = c.at(i, cols[j]);
      row_entropy[i] = entropy_bits(rows[i]);
    }
  }

  /// Divergence scores, achieved rate and its certified ceiling at input p:
  /// lower = I(p) = sum_i p_i D_i, upper = max_i D_i, valid bounds on the
  /// capacity at any p whatsoever.
  void bounds(const std::vector<double>& p, std::vector<double>& score, double& lower,
              double& upper) const {
    const std::size_t m = rows.size(), n = rows.front().size();
    std::vector<double> q(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) q[j] += p[i] * rows[i][j];
    }
    upper = -std::numeric_limits<double>::infinity();
    double h_out = 0.0, h_cond = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (q[j] > 0.0) h_out -= q[j] * std::log2(q[j]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      score[i] = kl_bits(rows[i], q);
      upper = std::max(upper, score[i]);
      h_cond += p[i] * row_entropy[i];
    }
    lower = h_out - h_cond;
  }

  /// p_i <- p_i * 2^(gamma * score_i), renormalized; computed in log2 domain
  /// with a 1e-300 floor so near-deterministic channels cannot underflow to
  /// an all-zero input.
  static std::vector<double> reweight(const std::vector<double>& p,
                                      const std::vector<double>& score, double gamma) {
    std::vector<double> out(p.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
      out[i] = std::log2(std::max(p[i], 1e-300)) + gamma * score[i];
      top = std::max(top, out[i]);
    }
    double sum = 0.0;
    for (double& x : out) {
      x = std::exp2(x - top);
      sum += x;
    }
    for (double& x : out) x /= sum;
    return out;
  }
};

}  // namespace detail

/// Alternating maximization of mutual information over input distributions.
/// Each round scores every input row by its divergence from the current
/// output distribution; the achieved rate is a lower bound and the maximum
/// score an upper bound on capacity, valid at every input, so the gap
/// between them certifies convergence no matter how an iterate was reached.
///
/// The textbook update reweights inputs by 2^score. Its contraction factor
/// collapses on channels with nearly dependent rows or with inactive inputs
/// (the gap can shrink slower than 1e-6 per round), so each round instead
/// picks, from a fixed trial family, the successor with the best achieved
/// rate: the 2^(gamma * score) update over a ladder of gamma values (gamma=1
/// is the textbook step and keeps the achieved rate monotone), blends toward
/// the uniform input (recovering inputs that an aggressive step squashed),
/// and the input restricted to rows scoring at least the achieved rate
/// (landing exactly on the face that carries an optimum with inactive
/// inputs). Any trial point whose own gap closes ends the search.
///
/// The reported capacity is the lower bound, recomputed at the returned
/// input through the public mutual_information, so callers reproduce it
/// exactly. Throws NoConvergence when max_iter rounds leave gap > tol.
inline CapacityResult blahut_arimoto(const Channel& c, double tol = 1e-9,
                                     std::size_t max_iter = 100000) {
  if (!(tol > 0.0)) fail(ErrorKind::ParameterOutOfRange, "tol must be positive");
  if (max_iter < 1) fail(ErrorKind::ParameterOutOfRange, "max_iter must be at least 1");

  const std::size_t m = c.input_count();
  const detail::BaWorkspace ws(c);

  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  std::vector<double> score(m), trial_score(m);

  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    const Dist input(p);
    double lower_raw, upper;
    ws.bounds(input.weights(), score, lower_raw, upper);
    const double lower = mutual_information(input, c);

    if (upper - lower <= tol) {
      return CapacityResult{lower, input, iter, lower, upper};
    }

    std::vector<double> best;
    double best_lower = -std::numeric_limits<double>::infinity();
    bool closed = false;
    auto consider = [&](std::vector<double> trial) {
      if (closed) return;
      double tl, tu;
      ws.bounds(trial, trial_score, tl, tu);
      if (tu - tl <= tol) {
        best = std::move(trial);
        closed = true;
        return;
      }
      if (tl > best_lower) {
        best_lower = tl;
        best = std::move(trial);
      }
    };

    double gamma = 1.0;
    for (int k = 0; k < 16 && !closed; ++k, gamma *= 4.0) {
      consider(detail::BaWorkspace::reweight(input.weights(), score, gamma));
    }
    for (double beta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      if (closed) break;
      std::vector<double> trial(m);
      for (std::size_t i = 0; i < m; ++i) {
        trial[i] = (1.0 - beta) * input[i] + beta / static_cast<double>(m);
      }
      consider(std::move(trial));
    }
    if (!closed) {
      std::vector<double> trial(m);
      double sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        trial[i] = score[i] >= lower_raw ? input[i] : 0.0;
        sum += trial[i];
      }
      if (sum > 0.0) {
        for (double& x : trial) x /= sum;
        consider(std::move(trial));
      }
    }
    p = std::move(best);
  }
  char msg[96];
  std::snprintf(msg, sizeof msg, "gap above %g after %zu iterations", tol, max_iter);
  fail(ErrorKind::NoConvergence, msg);
}

struct GridSearchResult {
  double value = 0.0;  // bits
  Dist argmax;
  std::size_t evaluations = 0;
};

namespace detail {

/// Mutual information for a raw input vector against precomputed rows and
/// row entropies; the hot path of the grid oracle.
inline double mi_raw(const std::vector<double>& p,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<double>& row_entropy) {
  const std::size_t n = rows.front().size();
  double h_out = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double qj = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) qj += p[i] * rows[i][j];
    if (qj > 0.0) h_out -= qj * std::log2(qj);
  }
  double h_cond = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) h_cond += p[i] * row_entropy[i];
  return h_out - h_cond;
}

/// Enumerates nonnegative integer vectors of length m summing to total, in
/// lexicographic order, invoking fn on each.
template <typename Fn>
void for_each_composition(std::size_t m, long long total, Fn&& fn) {
  std::vector<long long> a(m, 0);
  auto rec = [&](auto&& self, std::size_t idx, long long rest) -> void {
    if (idx + 1 == m) {
      a[idx] = rest;
      fn(a);
      return;
    }
    for (long long v = 0; v <= rest; ++v) {
      a[idx] = v;
      self(self, idx + 1, rest - v);
    }
  };
  rec(rec, 0, total);
}

}  // namespace detail

/// Exhaustive maximization of mutual information over the regular simplex
/// grid with `resolution` subdivisions per axis, then one refinement pass at
/// a tenth of the step around the best point. Deterministic: ties keep the
/// lexicographically first grid point. Restricted to channels with at most
/// four inputs; this exists to validate the iterative solver at desk scale,
/// not to be fast.
inline GridSearchResult capacity_grid_search(const Channel& c, std::size_t resolution) {
  const std::size_t m = c.input_count();
  if (m > 4) fail(ErrorKind::TooLarge, "grid oracle supports at most 4 inputs");
  if (resolution < 10) fail(ErrorKind::ParameterOutOfRange, "resolution must be at least 10");

  std::vector<std::vector<double>> rows;
  std::vector<double> row_entropy;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    rows.push_back(c.row(i).weights());
    row_entropy.push_back(entropy(c.row(i)));
  }

  const long long res = static_cast<long long>(resolution);
  std::vector<double> p(m);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<long long> best_a(m, 0);
  std::size_t evals = 0;

  detail::for_each_composition(m, res, [&](const std::vector<long long>& a) {
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = static_cast<double>(a[i]) / static_cast<double>(res);
    }
    const double v = detail::mi_raw(p, rows, row_entropy);
    ++evals;
    if (v > best) {
      best = v;
      best_a = a;
    }
  });

  // Refinement: all points of the ten-times-finer grid within one coarse
  // step of the winner, again in lexicographic order.
  const long long fine = 10 * res;
  std::vector<long long> center(m);
  for (std::size_t i = 0; i < m; ++i) center[i] = 10 * best_a[i];
  std::vector<long long> fine_best = center;
  std::vector<long long> d(m, 0);
  auto rec = [&](auto&& self, std::size_t idx, long long rest) -> void {
    if (idx + 1 == m) {
      d[idx] = rest;
      if (rest < -10 || rest > 10 || center[idx] + rest < 0) return;
      for (std::size_t i = 0; i < m; ++i) {
        p[i] = static_cast<double>(center[i] + d[i]) / static_cast<double>(fine);
      }
      const double v = detail::mi_raw(p, rows, row_entropy);
      ++evals;
      if (v > best) {
        best = v;
        fine_best = center;
        for (std::size_t i = 0; i < m; ++i) fine_best[i] += d[i];
      }
      return;
    }
    for (long long v = -10; v <= 10; ++v) {
      if (center[idx] + v < 0) continue;
      d[idx] = v;
      self(self, idx + 1, rest - v);
    }
  };
  rec(rec, 0, 0);

  std::vector<double> argmax(m);
  for (std::size_t i = 0; i < m; ++i) {
    argmax[i] = static_cast<double>(fine_best[i]) / static_cast<double>(fine);
  }
  return GridSearchResult{best, Dist(std::move(argmax)), evals};
}

inline double capacity_grid_oracle(const Channel& c, std::size_t resolution) {
  return capacity_grid_search(c, resolution).value;
}

/// Measurement of the polytope spanned by the generators: the supremum of
/// entropy_gap over mixing weights. Coincides with the capacity of the
/// channel whose rows are the generators, which is how it is computed.
inline double cap_polytope(const std::vector<Dist>& generators) {
  return blahut_arimoto(Channel(generators)).capacity;
}

}  // namespace stochannel

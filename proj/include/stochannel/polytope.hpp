#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stochannel/channel.hpp"
#include "stochannel/dist.hpp"
#include "stochannel/error.hpp"
#include "stochannel/simplex_lp.hpp"

namespace stochannel {

/// Convex polytope inside the probability simplex, kept as its generator
/// list. Duplicates and redundant generators are permitted; vertices() and
/// canonical_form() reduce to the minimal generating set on demand.
class Polytope {
 public:
  explicit Polytope(std::vector<Dist> generators) : gens_(std::move(generators)) {
    if (gens_.empty()) fail(ErrorKind::EmptyVector, "polytope needs at least one generator");
    const std::size_t n = gens_.front().size();
    for (const Dist& g : gens_) {
      if (g.size() != n) fail(ErrorKind::DimensionMismatch, "generators of unequal dimension");
    }
  }

  std::size_t dimension() const noexcept { return gens_.front().size(); }
  const std::vector<Dist>& generators() const noexcept { return gens_; }

 private:
  std::vector<Dist> gens_;
};

/// The image polytope of a channel: the convex hull of its rows, i.e. the
/// set of all output distributions the channel can produce.
inline Polytope rows_polytope(const Channel& c) { return Polytope(c.rows()); }

namespace detail {

/// Barycentric coefficients of a raw point over the generators, if the
/// point lies in their hull up to tol: solve G lambda = x, sum lambda = 1,
/// lambda >= 0 by phase-1 feasibility and accept optima below tol. The
/// point is treated as living on the affine hull of the simplex, so callers
/// may pass slightly perturbed (even slightly negative) coordinates.
inline std::optional<std::vector<double>> hull_coefficients(const Polytope& p,
                                                            const std::vector<double>& x,
                                                            double tol) {
  if (x.size() != p.dimension()) fail(ErrorKind::DimensionMismatch, "point dimension differs");
  if (!(tol > 0.0)) fail(ErrorKind::ParameterOutOfRange, "tol must be positive");
  const std::size_t n = p.dimension();
  const std::size_t k = p.generators().size();
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(k));
  std::vector<double> b(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = p.generators()[j][i];
    b[i] = x[i];
  }
  for (std::size_t j = 0; j < k; ++j) a[n][j] = 1.0;
  b[n] = 1.0;
  Phase1Result r = phase1_feasibility(a, b);
  if (r.infeasibility > tol) return std::nullopt;
  return std::move(r.solution);
}

/// Rounding key used wherever polytope results must be order-stable:
/// coordinates snapped to the 1e-9 grid, compared lexicographically.
inline std::vector<std::int64_t> rounded_key(const Dist& d) {
  std::vector<std::int64_t> key(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) key[i] = std::llround(d[i] * 1e9);
  return key;
}

}  // namespace detail

/// Hull membership decided by LP feasibility, within tol in each coordinate.
inline bool contains_point(const Polytope& p, const Dist& x, double tol) {
  return detail::hull_coefficients(p, x.weights(), tol).has_value();
}

/// Minimal generator subset with the same hull: generators expressible as
/// convex combinations of the others are dropped (pairwise LP redundancy
/// tests after exact-deduplication), result sorted lexicographically.
inline std::vector<Dist> vertices(const Polytope& p) {
  std::vector<Dist> pts;
  std::vector<std::vector<std::int64_t>> keys;
  for (const Dist& g : p.generators()) {
    auto key = detail::rounded_key(g);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      keys.push_back(std::move(key));
      pts.push_back(g);
    }
  }
  // Removing a redundant generator leaves the hull unchanged, so a single
  // sweep in any order finds the vertex set.
  for (std::size_t i = 0; i < pts.size() && pts.size() > 1;) {
    std::vector<Dist> others;
    others.reserve(pts.size() - 1);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) others.push_back(pts[j]);
    }
    if (contains_point(Polytope(std::move(others)), pts[i], kValidationTol)) {
      pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  std::sort(pts.begin(), pts.end(), [](const Dist& a, const Dist& b) {
    return detail::rounded_key(a) < detail::rounded_key(b);
  });
  return pts;
}

/// Pre-order on channels: every output distribution reachable through c is
/// reachable through d, i.e. the row polytope of c sits inside that of d.
/// Algebraically this is containment of the left minimal-ideal orbits.
inline bool leq_M(const Channel& c, const Channel& d) {
  if (c.output_count() != d.output_count()) {
    fail(ErrorKind::DimensionMismatch, "output dimensions differ");
  }
  const Polytope target = rows_polytope(d);
  for (const Dist& row : c.rows()) {
    if (!contains_point(target, row, kValidationTol)) return false;
  }
  return true;
}

/// Equivalence as image polytopes: containment both ways.
inline bool equiv_M_polytope(const Channel& c, const Channel& d) {
  if (c.input_count() != d.input_count() || c.output_count() != d.output_count()) {
    fail(ErrorKind::DimensionMismatch, "shapes differ");
  }
  return leq_M(c, d) && leq_M(d, c);
}

/// Equivalence as row multisets: some permutation of the rows of c gives
/// exactly the rows of d (after snapping to the 1e-9 grid). Strictly finer
/// than equiv_M_polytope: a channel may carry a redundant interior row that
/// changes the multiset but not the polytope.
inline bool equiv_M_rows(const Channel& c, const Channel& d) {
  if (c.input_count() != d.input_count() || c.output_count() != d.output_count()) {
    fail(ErrorKind::DimensionMismatch, "shapes differ");
  }
  std::vector<std::vector<std::int64_t>> kc, kd;
  for (const Dist& r : c.rows()) kc.push_back(detail::rounded_key(r));
  for (const Dist& r : d.rows()) kd.push_back(detail::rounded_key(r));
  std::sort(kc.begin(), kc.end());
  std::sort(kd.begin(), kd.end());
  return kc == kd;
}

/// Margin used by way_below: how far inside the interior a vertex must sit,
/// measured along the tangent directions of the simplex's affine hull.
inline constexpr double kWayBelowMargin = 1e-6;

/// Approximation relation of the reverse-inclusion order: p is way below q
/// when q lies in the interior of p relative to the affine hull of the
/// simplex. Decided by perturbing every vertex of q by +/- 1e-6 along each
/// tangent direction e_k - e_n and asking for hull membership of the raw
/// perturbed points (they stay on the affine hull but may leave the
/// simplex, which membership tolerates).
inline bool way_below(const Polytope& p, const Polytope& q) {
  if (p.dimension() != q.dimension()) fail(ErrorKind::DimensionMismatch, "dimensions differ");
  const std::size_t n = p.dimension();
  for (const Dist& v : vertices(q)) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> point = v.weights();
        point[k] += sign * kWayBelowMargin;
        point[n - 1] -= sign * kWayBelowMargin;
        if (!detail::hull_coefficients(p, point, kValidationTol)) return false;
      }
    }
  }
  return true;
}

/// Canonical representative of a channel's equivalence class: the sorted
/// vertex list of its row polytope. Two channels get identical canonical
/// forms exactly when they have the same image polytope.
inline Polytope canonical_form(const Channel& c) {
  return Polytope(vertices(rows_polytope(c)));
}

}  // namespace stochannel

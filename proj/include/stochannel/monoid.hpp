#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stochannel/channel.hpp"
#include "stochannel/dist.hpp"
#include "stochannel/error.hpp"

namespace stochannel {

/// Finite monoid given by labelled elements and a dense Cayley table.
/// make_monoid validates the table eagerly (identity scan plus the full
/// O(m^3) associativity check); library-built monoids that are associative
/// by construction skip the check.
class FiniteMonoid {
 public:
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t identity() const noexcept { return identity_; }
  std::size_t op(std::size_t i, std::size_t j) const {
    return table_[i * size() + j];
  }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool same_structure(const FiniteMonoid& other) const noexcept {
    return labels_ == other.labels_ && table_ == other.table_;
  }

 private:
  FiniteMonoid(std::vector<std::string> labels, std::vector<std::uint16_t> table,
               std::size_t identity)
      : labels_(std::move(labels)), table_(std::move(table)), identity_(identity) {}

  friend std::shared_ptr<const FiniteMonoid> make_monoid(
      std::vector<std::string>, const std::vector<std::vector<std::size_t>>&);
  friend std::shared_ptr<const FiniteMonoid> transformation_monoid(std::size_t);

  std::vector<std::string> labels_;
  std::vector<std::uint16_t> table_;  // row-major m x m
  std::size_t identity_;
};

using MonoidPtr = std::shared_ptr<const FiniteMonoid>;

inline MonoidPtr make_monoid(std::vector<std::string> labels,
                             const std::vector<std::vector<std::size_t>>& table) {
  const std::size_t m = labels.size();
  if (m == 0) fail(ErrorKind::BadTable, "monoid needs at least one element");
  if (m > 0xffff) fail(ErrorKind::BadTable, "carrier too large");
  if (table.size() != m) fail(ErrorKind::BadTable, "table is not m x m");
  {
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail(ErrorKind::BadTable, "duplicate element labels");
    }
  }
  std::vector<std::uint16_t> flat(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    if (table[i].size() != m) fail(ErrorKind::BadTable, "table is not m x m");
    for (std::size_t j = 0; j < m; ++j) {
      if (table[i][j] >= m) fail(ErrorKind::BadTable, "table entry out of range");
      flat[i * m + j] = static_cast<std::uint16_t>(table[i][j]);
    }
  }

  std::size_t identity = m;
  for (std::size_t e = 0; e < m; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < m && ok; ++x) {
      ok = flat[e * m + x] == x && flat[x * m + e] == x;
    }
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity == m) fail(ErrorKind::NoIdentity, "no two-sided identity element");

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t ij = flat[i * m + j];
      for (std::size_t k = 0; k < m; ++k) {
        if (flat[ij * m + k] != flat[i * m + flat[j * m + k]]) {
          fail(ErrorKind::NotAssociative,
               "associativity fails at (" + std::to_string(i) + "," + std::to_string(j) +
                   "," + std::to_string(k) + ")");
        }
      }
    }
  }
  return MonoidPtr(new FiniteMonoid(std::move(labels), std::move(flat), identity));
}

namespace detail {

/// One-line label "f:490..." for a selfmap of {0..n-1}; digits are images.
inline std::string selfmap_label(const std::vector<std::size_t>& map) {
  std::string s = "f:";
  for (std::size_t v : map) s += static_cast<char>('0' + v);
  return s;
}

/// Parses a one-line selfmap label; nullopt when the label does not follow
/// the convention or has an image out of range.
inline std::optional<std::vector<std::size_t>> parse_selfmap_label(const std::string& label,
                                                                   std::size_t n) {
  if (label.size() != n + 2 || label[0] != 'f' || label[1] != ':') return std::nullopt;
  std::vector<std::size_t> map(n);
  for (std::size_t i = 0; i < n; ++i) {
    const char c = label[i + 2];
    if (c < '0' || c > '9') return std::nullopt;
    map[i] = static_cast<std::size_t>(c - '0');
    if (map[i] >= n) return std::nullopt;
  }
  return map;
}

}  // namespace detail

/// The full transformation monoid T(n): all n^n selfmaps of {0..n-1} under
/// the algebraic composition convention (fg)(x) = g(f(x)), matching the
/// row-vector convention for channel products. Elements are enumerated
/// lexicographically by one-line notation and labelled "f:<images>".
/// Associative by construction, so the table is trusted rather than
/// re-validated (T(5) already has 3125 elements).
inline MonoidPtr transformation_monoid(std::size_t n) {
  if (n == 0) fail(ErrorKind::BadTable, "carrier must be nonempty");
  if (n > 5) fail(ErrorKind::TooLarge, "transformation monoid capped at n = 5");
  std::size_t m = 1;
  for (std::size_t i = 0; i < n; ++i) m *= n;

  std::vector<std::vector<std::size_t>> maps(m, std::vector<std::size_t>(n));
  std::vector<std::string> labels(m);
  for (std::size_t idx = 0; idx < m; ++idx) {
    std::size_t rem = idx;
    for (std::size_t pos = n; pos-- > 0;) {
      maps[idx][pos] = rem % n;
      rem /= n;
    }
    labels[idx] = detail::selfmap_label(maps[idx]);
  }

  // Index of a map from its digits, big-endian base n.
  auto index_of = [&](const std::vector<std::size_t>& f) {
    std::size_t idx = 0;
    for (std::size_t pos = 0; pos < n; ++pos) idx = idx * n + f[pos];
    return idx;
  };

  std::vector<std::uint16_t> flat(m * m);
  std::vector<std::size_t> comp(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t x = 0; x < n; ++x) comp[x] = maps[j][maps[i][x]];
      flat[i * m + j] = static_cast<std::uint16_t>(index_of(comp));
    }
  }

  std::vector<std::size_t> id(n);
  for (std::size_t x = 0; x < n; ++x) id[x] = x;
  return MonoidPtr(new FiniteMonoid(std::move(labels), std::move(flat), index_of(id)));
}

/// Probability measure on a finite monoid: a weight per element.
struct ProbMeasure {
  MonoidPtr monoid;
  Dist weights;

  ProbMeasure(MonoidPtr m, Dist w) : monoid(std::move(m)), weights(std::move(w)) {
    if (!monoid) fail(ErrorKind::BadTable, "measure needs a monoid");
    if (weights.size() != monoid->size()) {
      fail(ErrorKind::DimensionMismatch, "weight count differs from carrier size");
    }
  }
};

inline ProbMeasure dirac_measure(MonoidPtr monoid, std::size_t element) {
  if (!monoid) fail(ErrorKind::BadTable, "measure needs a monoid");
  return ProbMeasure(monoid, dirac(element, monoid->size()));
}

inline ProbMeasure uniform_measure(MonoidPtr monoid) {
  if (!monoid) fail(ErrorKind::BadTable, "measure needs a monoid");
  return ProbMeasure(monoid, uniform_dist(monoid->size()));
}

namespace detail {

inline void require_same_monoid(const ProbMeasure& mu, const ProbMeasure& nu) {
  if (mu.monoid == nu.monoid) return;
  if (!mu.monoid->same_structure(*nu.monoid)) {
    fail(ErrorKind::MonoidMismatch, "measures live on different monoids");
  }
}

}  // namespace detail

/// Convolution (mu * nu)(z) = sum over x y = z of mu(x) nu(y). Extends the
/// Cayley table bilinearly: Diracs multiply as elements do.
inline ProbMeasure convolve(const ProbMeasure& mu, const ProbMeasure& nu) {
  detail::require_same_monoid(mu, nu);
  const FiniteMonoid& s = *mu.monoid;
  std::vector<double> out(s.size(), 0.0);
  for (std::size_t x = 0; x < s.size(); ++x) {
    const double wx = mu.weights[x];
    if (wx == 0.0) continue;
    for (std::size_t y = 0; y < s.size(); ++y) {
      out[s.op(x, y)] += wx * nu.weights[y];
    }
  }
  return ProbMeasure(mu.monoid, Dist(std::move(out)));
}

/// Elements carrying weight above the 1e-12 support threshold.
inline std::vector<std::size_t> support(const ProbMeasure& mu) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < mu.weights.size(); ++i) {
    if (mu.weights[i] > 1e-12) s.push_back(i);
  }
  return s;
}

/// Image measure along a monoid homomorphism phi (verified exhaustively:
/// phi(1) = 1 and phi(xy) = phi(x)phi(y)).
inline ProbMeasure pushforward_hom(const std::vector<std::size_t>& phi, const ProbMeasure& mu,
                                   MonoidPtr target) {
  if (!target) fail(ErrorKind::BadTable, "pushforward needs a target monoid");
  const FiniteMonoid& s = *mu.monoid;
  const FiniteMonoid& t = *target;
  if (phi.size() != s.size()) fail(ErrorKind::DimensionMismatch, "map size differs from carrier");
  for (std::size_t v : phi) {
    if (v >= t.size()) fail(ErrorKind::IndexOutOfRange, "map image out of range");
  }
  if (phi[s.identity()] != t.identity()) {
    fail(ErrorKind::NotHomomorphism, "identity is not preserved");
  }
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t y = 0; y < s.size(); ++y) {
      if (phi[s.op(x, y)] != t.op(phi[x], phi[y])) {
        fail(ErrorKind::NotHomomorphism,
             "multiplicativity fails at (" + std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t x = 0; x < s.size(); ++x) out[phi[x]] += mu.weights[x];
  return ProbMeasure(std::move(target), Dist(std::move(out)));
}

/// Group of units: elements with a two-sided inverse, by exhaustive scan.
inline std::vector<std::size_t> units(const FiniteMonoid& s) {
  const std::size_t e = s.identity();
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t y = 0; y < s.size(); ++y) {
      if (s.op(x, y) == e && s.op(y, x) == e) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

inline bool is_group(const FiniteMonoid& s) { return units(s).size() == s.size(); }

/// Smallest two-sided ideal, computed as the intersection of every
/// principal ideal S t S (nonempty for any finite monoid).
inline std::vector<std::size_t> minimal_ideal(const FiniteMonoid& s) {
  const std::size_t m = s.size();
  std::vector<std::uint8_t> inter(m, 1);
  std::vector<std::uint8_t> left(m), ideal(m);
  for (std::size_t t = 0; t < m; ++t) {
    std::fill(left.begin(), left.end(), 0);
    std::fill(ideal.begin(), ideal.end(), 0);
    for (std::size_t x = 0; x < m; ++x) left[s.op(x, t)] = 1;
    for (std::size_t l = 0; l < m; ++l) {
      if (!left[l]) continue;
      for (std::size_t y = 0; y < m; ++y) ideal[s.op(l, y)] = 1;
    }
    for (std::size_t v = 0; v < m; ++v) inter[v] &= ideal[v];
  }
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < m; ++v) {
    if (inter[v]) out.push_back(v);
  }
  return out;
}

/// Haar measure of a finite group: the equidistribution, which is the zero
/// of the convolution monoid.
inline ProbMeasure haar(MonoidPtr monoid) {
  if (!monoid) fail(ErrorKind::BadTable, "haar needs a monoid");
  if (!is_group(*monoid)) fail(ErrorKind::NotAGroup, "haar measure requires a group");
  return uniform_measure(std::move(monoid));
}

/// Averages the 0/1 matrices of a transformation monoid's elements by their
/// measure weights, the canonical surjection onto stochastic matrices. The
/// monoid must decode as a transformation monoid: every label in one-line
/// "f:..." notation and the Cayley table consistent with composition.
inline Channel measure_to_channel(const ProbMeasure& mu) {
  const FiniteMonoid& s = *mu.monoid;
  if (s.label(0).size() < 3) {
    fail(ErrorKind::MonoidMismatch, "labels are not one-line selfmaps");
  }
  const std::size_t n = s.label(0).size() - 2;

  std::vector<std::vector<std::size_t>> maps;
  maps.reserve(s.size());
  std::unordered_map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto map = detail::parse_selfmap_label(s.label(i), n);
    if (!map) fail(ErrorKind::MonoidMismatch, "labels are not one-line selfmaps");
    index_of[s.label(i)] = i;
    maps.push_back(std::move(*map));
  }
  std::vector<std::size_t> comp(n);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      for (std::size_t x = 0; x < n; ++x) comp[x] = maps[j][maps[i][x]];
      const auto it = index_of.find(detail::selfmap_label(comp));
      if (it == index_of.end() || it->second != s.op(i, j)) {
        fail(ErrorKind::MonoidMismatch, "Cayley table is not selfmap composition");
      }
    }
  }

  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double w = mu.weights[i];
    if (w == 0.0) continue;
    for (std::size_t x = 0; x < n; ++x) rows[x][maps[i][x]] += w;
  }
  return make_channel(rows);
}

struct BirkhoffTerm {
  double weight;
  Permutation perm;
};

namespace detail {

/// Kuhn augmenting-path step: tries to match row r given the positive-entry
/// adjacency, recursing through alternating paths.
inline bool augment(std::size_t r, const std::vector<std::vector<std::size_t>>& adj,
                    std::vector<std::size_t>& match_col, std::vector<char>& seen) {
  for (std::size_t c : adj[r]) {
    if (seen[c]) continue;
    seen[c] = 1;
    if (match_col[c] == adj.size() || augment(match_col[c], adj, match_col, seen)) {
      match_col[c] = r;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Birkhoff decomposition of a doubly stochastic matrix: repeatedly find a
/// perfect matching on the positive entries (> 1e-12), peel off the minimal
/// matched entry as one permutation term, and stop when the residual is
/// exhausted. At most (n-1)^2 + 1 terms; weights renormalized to unit sum.
inline std::vector<BirkhoffTerm> birkhoff_decompose(const Channel& d) {
  if (!is_doubly_stochastic(d)) {
    fail(ErrorKind::NotDoublyStochastic, "matrix has a column sum away from 1");
  }
  const std::size_t n = d.input_count();
  std::vector<std::vector<double>> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = d.row(i).weights();

  constexpr double kPositive = 1e-12;
  std::vector<BirkhoffTerm> terms;
  const std::size_t max_terms = (n - 1) * (n - 1) + 1;

  for (std::size_t step = 0; step <= max_terms; ++step) {
    double peak = 0.0;
    for (const auto& row : r) {
      for (double v : row) peak = std::max(peak, v);
    }
    if (peak <= kPositive) break;
    if (step == max_terms) {
      fail(ErrorKind::DecompositionFailed, "residual not exhausted within the term bound");
    }

    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (r[i][j] > kPositive) adj[i].push_back(j);
      }
    }
    std::vector<std::size_t> match_col(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<char> seen(n, 0);
      if (!detail::augment(i, adj, match_col, seen)) {
        fail(ErrorKind::DecompositionFailed, "no perfect matching on positive entries");
      }
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t c = 0; c < n; ++c) perm[match_col[c]] = c;

    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) w = std::min(w, r[i][perm[i]]);
    for (std::size_t i = 0; i < n; ++i) r[i][perm[i]] -= w;
    terms.push_back(BirkhoffTerm{w, Permutation(std::move(perm))});
  }

  double total = 0.0;
  for (const BirkhoffTerm& t : terms) total += t.weight;
  for (BirkhoffTerm& t : terms) t.weight /= total;
  return terms;
}

}  // namespace stochannel

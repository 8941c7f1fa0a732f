#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stochannel/dist.hpp"
#include "stochannel/error.hpp"

namespace stochannel {

/// Permutation of {0,...,n-1} in one-line notation.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> one_line) : map_(std::move(one_line)) {
    if (map_.empty()) fail(ErrorKind::EmptyVector, "empty permutation");
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
      if (v >= map_.size() || seen[v]) {
        fail(ErrorKind::IndexOutOfRange, "not a bijection on {0..n-1}");
      }
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
    return Permutation(std::move(m));
  }

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  const std::vector<std::size_t>& mapping() const noexcept { return map_; }

  /// Algebraic-order product: (this.then(s))(x) = s(this(x)).
  Permutation then(const Permutation& s) const {
    if (s.size() != size()) fail(ErrorKind::DimensionMismatch, "permutation sizes differ");
    std::vector<std::size_t> m(size());
    for (std::size_t i = 0; i < size(); ++i) m[i] = s.map_[map_[i]];
    return Permutation(std::move(m));
  }

  Permutation inverse() const {
    std::vector<std::size_t> m(size());
    for (std::size_t i = 0; i < size(); ++i) m[map_[i]] = i;
    return Permutation(std::move(m));
  }

  bool operator==(const Permutation& other) const noexcept { return map_ == other.map_; }

 private:
  std::vector<std::size_t> map_;
};

/// Row-stochastic m x n matrix: row i is the output distribution for input i.
/// Channels compose as matrices under the row-vector convention p * C, so a
/// channel is exactly a Kleisli map from m inputs to distributions on n outputs.
class Channel {
 public:
  explicit Channel(std::vector<Dist> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) fail(ErrorKind::EmptyVector, "channel needs at least one row");
    const std::size_t n = rows_.front().size();
    for (const Dist& r : rows_) {
      if (r.size() != n) fail(ErrorKind::RaggedMatrix, "rows of unequal length");
    }
  }

  std::size_t input_count() const noexcept { return rows_.size(); }
  std::size_t output_count() const noexcept { return rows_.front().size(); }
  const Dist& row(std::size_t i) const { return rows_[i]; }
  const std::vector<Dist>& rows() const noexcept { return rows_; }
  double at(std::size_t i, std::size_t j) const { return rows_[i][j]; }

 private:
  std::vector<Dist> rows_;
};

inline Channel make_channel(const std::vector<std::vector<double>>& raw) {
  if (raw.empty()) fail(ErrorKind::EmptyVector, "channel needs at least one row");
  const std::size_t n = raw.front().size();
  std::vector<Dist> rows;
  rows.reserve(raw.size());
  for (const auto& r : raw) {
    if (r.size() != n) fail(ErrorKind::RaggedMatrix, "rows of unequal length");
    rows.emplace_back(r);
  }
  return Channel(std::move(rows));
}

/// p * C: the output distribution induced by feeding p through C.
inline Dist pushforward(const Dist& p, const Channel& c) {
  if (p.size() != c.input_count()) {
    fail(ErrorKind::DimensionMismatch,
         "input of size " + std::to_string(p.size()) + " for " +
             std::to_string(c.input_count()) + " channel rows");
  }
  std::vector<double> out(c.output_count(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double w = p[i];
    const auto& row = c.row(i).weights();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * row[j];
  }
  return Dist(std::move(out));
}

/// Kleisli composition "first c, then d", i.e. the matrix product c * d.
inline Channel compose(const Channel& c, const Channel& d) {
  if (c.output_count() != d.input_count()) {
    fail(ErrorKind::DimensionMismatch, "inner dimensions disagree");
  }
  std::vector<Dist> rows;
  rows.reserve(c.input_count());
  for (std::size_t i = 0; i < c.input_count(); ++i) {
    rows.push_back(pushforward(c.row(i), d));
  }
  return Channel(std::move(rows));
}

/// H(output | input) = sum_i p_i H(row_i), in bits.
inline double conditional_entropy(const Dist& p, const Channel& c) {
  if (p.size() != c.input_count()) fail(ErrorKind::DimensionMismatch, "dimensions disagree");
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) h += p[i] * entropy(c.row(i));
  return h;
}

/// I(p; c) = H(p*c) - H(output | input), in bits.
inline double mutual_information(const Dist& p, const Channel& c) {
  return entropy(pushforward(p, c)) - conditional_entropy(p, c);
}

inline Channel identity_channel(std::size_t n) {
  std::vector<Dist> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rows.push_back(dirac(i, n));
  return Channel(std::move(rows));
}

/// The 0/1 stochastic matrix of pi: row i is the point mass at pi(i).
inline Channel permutation_channel(const Permutation& pi) {
  std::vector<Dist> rows;
  rows.reserve(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) rows.push_back(dirac(pi(i), pi.size()));
  return Channel(std::move(rows));
}

/// Every row equal to q; for q = dirac(k, n) this is the left-zero channel
/// that forgets its input entirely.
inline Channel constant_channel(const Dist& q, std::size_t input_count) {
  if (input_count == 0) fail(ErrorKind::EmptyVector, "channel needs at least one row");
  return Channel(std::vector<Dist>(input_count, q));
}

inline Channel constant_channel(const Dist& q) { return constant_channel(q, q.size()); }

/// One-parameter family p * I_n + (1-p) * O_k joining the constant channel
/// onto output k (p = 0) to the identity (p = 1).
inline Channel z_channel(std::size_t n, std::size_t k, double p) {
  if (k >= n) fail(ErrorKind::IndexOutOfRange, "output index out of range");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::ParameterOutOfRange, "p must lie in [0,1]");
  std::vector<Dist> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] += p;
    row[k] += 1.0 - p;
    rows.emplace_back(std::move(row));
  }
  return Channel(std::move(rows));
}

/// True iff the (square) channel's columns also sum to one within 1e-9.
inline bool is_doubly_stochastic(const Channel& c) {
  if (c.input_count() != c.output_count()) {
    fail(ErrorKind::NotSquare, "doubly stochastic test needs a square matrix");
  }
  for (std::size_t j = 0; j < c.output_count(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.input_count(); ++i) s += c.at(i, j);
    if (std::abs(s - 1.0) > kValidationTol) return false;
  }
  return true;
}

}  // namespace stochannel

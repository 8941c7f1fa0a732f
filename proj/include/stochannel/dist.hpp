#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stochannel/error.hpp"

namespace stochannel {

/// Tolerance accepted on input sums and column sums before exact
/// renormalization takes over.
inline constexpr double kValidationTol = 1e-9;

namespace detail {

/// -sum p log2 p over a raw weight vector, with the 0 log 0 = 0 branch
/// taken explicitly so zeros never produce NaNs.
template <typename Range>
double entropy_bits(const Range& weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

}  // namespace detail

/// Probability vector on n >= 1 points. Immutable: construction rejects
/// weights below -1e-9 and sums outside 1 +/- 1e-9, clamps residual
/// negatives to zero and renormalizes to unit sum, so every downstream
/// consumer sees a frozen, exactly normalized vector.
class Dist {
 public:
  explicit Dist(std::vector<double> raw) : weights_(std::move(raw)) {
    if (weights_.empty()) fail(ErrorKind::EmptyVector, "distribution needs at least one weight");
    double sum = 0.0;
    for (double& w : weights_) {
      if (w < -kValidationTol) {
        fail(ErrorKind::NegativeWeight,
             "negative weight " + std::to_string(w));
      }
      if (w < 0.0) w = 0.0;
      sum += w;
    }
    if (sum < 1.0 - kValidationTol || sum > 1.0 + kValidationTol) {
      fail(ErrorKind::NotNormalized, "weights sum to " + std::to_string(sum));
    }
    for (double& w : weights_) w /= sum;
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  bool operator==(const Dist& other) const noexcept {
    return weights_ == other.weights_;
  }

 private:
  std::vector<double> weights_;
};

inline Dist make_dist(std::vector<double> raw) { return Dist(std::move(raw)); }

/// Point mass at i on n points (the monad unit).
inline Dist dirac(std::size_t i, std::size_t n) {
  if (n == 0) fail(ErrorKind::EmptyVector, "dirac on empty carrier");
  if (i >= n) {
    fail(ErrorKind::IndexOutOfRange,
         "dirac index " + std::to_string(i) + " on " + std::to_string(n) + " points");
  }
  std::vector<double> w(n, 0.0);
  w[i] = 1.0;
  return Dist(std::move(w));
}

inline Dist uniform_dist(std::size_t n) {
  if (n == 0) fail(ErrorKind::EmptyVector, "uniform on empty carrier");
  return Dist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

/// Shannon entropy in bits; 0 <= entropy(p) <= log2(size).
inline double entropy(const Dist& p) { return detail::entropy_bits(p.weights()); }

/// Convex combination sum_j weights[j] * points[j]. All points must share
/// one dimension; the result is revalidated.
inline Dist convex_combine(const Dist& weights, const std::vector<Dist>& points) {
  if (points.size() != weights.size()) {
    fail(ErrorKind::DimensionMismatch,
         "got " + std::to_string(points.size()) + " points for " +
             std::to_string(weights.size()) + " weights");
  }
  const std::size_t n = points.front().size();
  for (const Dist& pt : points) {
    if (pt.size() != n) fail(ErrorKind::DimensionMismatch, "points of unequal dimension");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double w = weights[j];
    for (std::size_t i = 0; i < n; ++i) out[i] += w * points[j][i];
  }
  return Dist(std::move(out));
}

}  // namespace stochannel

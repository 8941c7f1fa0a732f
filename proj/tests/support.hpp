#pragma once

// Shared fixtures for the unit and acceptance suites: seeded random
// distributions/channels/permutations, small Cayley tables, and independent
// closed-form oracles kept strictly out of the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochannel/stochannel.hpp"

namespace testsupport {

inline std::vector<double> random_weights(std::mt19937& rng, std::size_t n) {
  // Dirichlet(1,...,1) via normalized exponentials.
  std::uniform_real_distribution<double> u(1e-12, 1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = -std::log(u(rng));
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

inline stochannel::Dist random_dist(std::mt19937& rng, std::size_t n) {
  return stochannel::Dist(random_weights(rng, n));
}

inline stochannel::Channel random_channel(std::mt19937& rng, std::size_t m, std::size_t n) {
  std::vector<stochannel::Dist> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) rows.push_back(random_dist(rng, n));
  return stochannel::Channel(std::move(rows));
}

inline stochannel::Permutation random_permutation(std::mt19937& rng, std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  std::shuffle(v.begin(), v.end(), rng);
  return stochannel::Permutation(std::move(v));
}

/// Convex combination of up to max_terms random permutation matrices.
inline stochannel::Channel random_doubly_stochastic(std::mt19937& rng, std::size_t n,
                                                    std::size_t max_terms) {
  const std::size_t k = 1 + rng() % max_terms;
  const std::vector<double> w = random_weights(rng, k);
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t t = 0; t < k; ++t) {
    const stochannel::Permutation pi = random_permutation(rng, n);
    for (std::size_t i = 0; i < n; ++i) rows[i][pi(i)] += w[t];
  }
  return stochannel::make_channel(rows);
}

/// Closed-form capacity of z_channel(2, 1, p): an oracle independent of the
/// iterative solver for the whole one-parameter family.
inline double z2_capacity_closed_form(double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return std::log2(1.0 + p * std::pow(1.0 - p, (1.0 - p) / p));
}

template <typename F>
stochannel::ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const stochannel::Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected a stochannel::Error");
}

inline stochannel::MonoidPtr cyclic_monoid(std::size_t n) {
  std::vector<std::string> labels(n);
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = "g" + std::to_string(i);
    for (std::size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return stochannel::make_monoid(std::move(labels), table);
}

/// S(3) with elements in lexicographic one-line order and the algebraic
/// composition convention (x then y).
inline stochannel::MonoidPtr symmetric_group3() {
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p{0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  auto index_of = [&](const std::vector<std::size_t>& q) {
    for (std::size_t i = 0; i < perms.size(); ++i) {
      if (perms[i] == q) return i;
    }
    throw std::runtime_error("not a permutation of 3");
  };

  std::vector<std::string> labels;
  for (const auto& q : perms) {
    std::string s = "s";
    for (std::size_t v : q) s += static_cast<char>('0' + v);
    labels.push_back(s);
  }
  std::vector<std::vector<std::size_t>> table(6, std::vector<std::size_t>(6));
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) {
      std::vector<std::size_t> comp(3);
      for (std::size_t x = 0; x < 3; ++x) comp[x] = perms[j][perms[i][x]];
      table[i][j] = index_of(comp);
    }
  }
  return stochannel::make_monoid(std::move(labels), table);
}

/// Random measure whose support weights stay well above the 1e-12 support
/// threshold, for exact support-law checks.
inline stochannel::ProbMeasure random_chunky_measure(std::mt19937& rng,
                                                     const stochannel::MonoidPtr& monoid) {
  const std::size_t m = monoid->size();
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<char> in(m, 0);
  std::size_t count = 1 + rng() % m;
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<double> w(m, 0.0);
  double sum = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    w[idx[t]] = u(rng);
    sum += w[idx[t]];
  }
  for (double& x : w) x /= sum;
  return stochannel::ProbMeasure(monoid, stochannel::Dist(std::move(w)));
}

}  // namespace testsupport

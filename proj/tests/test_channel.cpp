#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "stochannel/channel.hpp"
#include "support.hpp"

using namespace stochannel;
using Catch::Matchers::WithinAbs;
using testsupport::error_kind;

namespace {

double max_entry_diff(const Channel& a, const Channel& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.input_count(); ++i) {
    for (std::size_t j = 0; j < a.output_count(); ++j) {
      d = std::max(d, std::abs(a.at(i, j) - b.at(i, j)));
    }
  }
  return d;
}

}  // namespace

TEST_CASE("make_channel validates rows") {
  const Channel id = make_channel({{1, 0}, {0, 1}});
  REQUIRE(id.input_count() == 2);
  REQUIRE(id.output_count() == 2);
  REQUIRE(id.at(0, 0) == 1.0);

  REQUIRE_NOTHROW(make_channel({{0.5, 0.5}, {0.5, 0.5}}));
  REQUIRE(error_kind([] { make_channel({{0.5, 0.5}, {0.7, 0.7}}); }) ==
          ErrorKind::NotNormalized);
  REQUIRE(error_kind([] { make_channel({{0.5, 0.5}, {1.0}}); }) == ErrorKind::RaggedMatrix);
  REQUIRE(error_kind([] { make_channel({}); }) == ErrorKind::EmptyVector);
}

TEST_CASE("pushforward is p*C") {
  const Channel c = make_channel({{0.3, 0.7}, {0.6, 0.4}});
  REQUIRE(pushforward(dirac(0, 2), c).weights() == c.row(0).weights());
  REQUIRE(pushforward(uniform_dist(2), identity_channel(2)).weights() ==
          std::vector<double>{0.5, 0.5});

  const Dist out = pushforward(make_dist({0.25, 0.75}), make_channel({{1, 0}, {0.5, 0.5}}));
  REQUIRE_THAT(out[0], WithinAbs(0.625, 1e-15));
  REQUIRE_THAT(out[1], WithinAbs(0.375, 1e-15));

  REQUIRE(error_kind([&] { pushforward(uniform_dist(3), c); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("compose is the matrix product") {
  std::mt19937 rng(7201);
  const Channel c = testsupport::random_channel(rng, 2, 3);
  REQUIRE(max_entry_diff(compose(identity_channel(2), c), c) == 0.0);

  const Dist q = make_dist({0.2, 0.5, 0.3});
  REQUIRE(max_entry_diff(compose(c, constant_channel(q, 3)), constant_channel(q, 2)) <= 1e-15);
  REQUIRE(max_entry_diff(compose(constant_channel(q, 2), testsupport::random_channel(rng, 3, 3)),
                         constant_channel(q, 2)) >= 0.0);

  const Channel d = testsupport::random_channel(rng, 3, 3);
  REQUIRE(max_entry_diff(compose(constant_channel(q, 2), d),
                         constant_channel(pushforward(q, d), 2)) <= 1e-15);

  REQUIRE(error_kind([&] { compose(c, identity_channel(2)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("channel monoid laws hold on random triples") {
  std::mt19937 rng(7202);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const Channel a = testsupport::random_channel(rng, n, n);
    const Channel b = testsupport::random_channel(rng, n, n);
    const Channel c = testsupport::random_channel(rng, n, n);
    REQUIRE(max_entry_diff(compose(compose(a, b), c), compose(a, compose(b, c))) <= 1e-12);
    REQUIRE(max_entry_diff(compose(identity_channel(n), a), a) <= 1e-12);
    REQUIRE(max_entry_diff(compose(a, identity_channel(n)), a) <= 1e-12);
  }
}

TEST_CASE("pushforward is affine in the input") {
  std::mt19937 rng(7203);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + rng() % 3;
    const std::size_t n = 2 + rng() % 3;
    const Channel c = testsupport::random_channel(rng, m, n);
    const Dist p = testsupport::random_dist(rng, m);
    const Dist p2 = testsupport::random_dist(rng, m);
    const Dist w = testsupport::random_dist(rng, 2);
    const Dist lhs = pushforward(convex_combine(w, {p, p2}), c);
    const Dist rhs = convex_combine(w, {pushforward(p, c), pushforward(p2, c)});
    for (std::size_t j = 0; j < n; ++j) REQUIRE_THAT(lhs[j], WithinAbs(rhs[j], 1e-12));
  }
}

TEST_CASE("conditional entropy matches frozen evaluations") {
  REQUIRE(conditional_entropy(uniform_dist(2), identity_channel(2)) == 0.0);

  const Dist q = make_dist({0.2, 0.8});
  REQUIRE_THAT(conditional_entropy(make_dist({0.3, 0.7}), constant_channel(q, 2)),
               WithinAbs(entropy(q), 1e-14));

  const Channel bsc = make_channel({{0.9, 0.1}, {0.1, 0.9}});
  REQUIRE_THAT(conditional_entropy(uniform_dist(2), bsc),
               WithinAbs(0.4689955935892812, 1e-14));
}

TEST_CASE("mutual information matches frozen evaluations") {
  REQUIRE_THAT(mutual_information(uniform_dist(2), identity_channel(2)),
               WithinAbs(1.0, 1e-15));

  std::mt19937 rng(7204);
  const Dist q = testsupport::random_dist(rng, 3);
  REQUIRE_THAT(mutual_information(testsupport::random_dist(rng, 2), constant_channel(q, 2)),
               WithinAbs(0.0, 1e-12));

  const Channel bsc = make_channel({{0.9, 0.1}, {0.1, 0.9}});
  REQUIRE_THAT(mutual_information(uniform_dist(2), bsc),
               WithinAbs(0.5310044064107188, 1e-14));
}

TEST_CASE("mutual information is nonnegative and bounded by both entropies") {
  std::mt19937 rng(7205);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng() % 3;
    const std::size_t n = 2 + rng() % 3;
    const Channel c = testsupport::random_channel(rng, m, n);
    const Dist p = testsupport::random_dist(rng, m);
    const double mi = mutual_information(p, c);
    REQUIRE(mi >= -1e-12);
    REQUIRE(mi <= std::min(entropy(p), entropy(pushforward(p, c))) + 1e-12);
  }
}

TEST_CASE("constructors for special channels") {
  REQUIRE(max_entry_diff(identity_channel(2), make_channel({{1, 0}, {0, 1}})) == 0.0);

  REQUIRE(max_entry_diff(permutation_channel(Permutation({1, 0})),
                         make_channel({{0, 1}, {1, 0}})) == 0.0);
  REQUIRE(error_kind([] { Permutation({1, 1}); }) == ErrorKind::IndexOutOfRange);
  REQUIRE(error_kind([] { Permutation({0, 2}); }) == ErrorKind::IndexOutOfRange);

  // O_1 on two letters: both rows are the point mass at output 1.
  REQUIRE(max_entry_diff(constant_channel(make_dist({0, 1})),
                         make_channel({{0, 1}, {0, 1}})) == 0.0);
}

TEST_CASE("z_channel interpolates identity and collapse") {
  REQUIRE(max_entry_diff(z_channel(2, 1, 0.5), make_channel({{0.5, 0.5}, {0, 1}})) == 0.0);
  REQUIRE(max_entry_diff(z_channel(2, 1, 1.0), identity_channel(2)) == 0.0);
  REQUIRE(max_entry_diff(z_channel(2, 1, 0.0), constant_channel(dirac(1, 2))) == 0.0);
  REQUIRE(error_kind([] { z_channel(2, 2, 0.5); }) == ErrorKind::IndexOutOfRange);
  REQUIRE(error_kind([] { z_channel(2, 1, 1.5); }) == ErrorKind::ParameterOutOfRange);
  REQUIRE(error_kind([] { z_channel(2, 1, -0.1); }) == ErrorKind::ParameterOutOfRange);
}

TEST_CASE("doubly stochastic detection") {
  REQUIRE(is_doubly_stochastic(make_channel({{0.5, 0.5}, {0.5, 0.5}})));
  std::mt19937 rng(7206);
  for (int trial = 0; trial < 20; ++trial) {
    REQUIRE(is_doubly_stochastic(permutation_channel(testsupport::random_permutation(rng, 4))));
  }
  REQUIRE_FALSE(is_doubly_stochastic(make_channel({{1, 0}, {0.5, 0.5}})));
  REQUIRE(error_kind([] { is_doubly_stochastic(make_channel({{0.5, 0.5}})); }) ==
          ErrorKind::NotSquare);
}

TEST_CASE("permutation_channel turns composition into matrix product") {
  std::mt19937 rng(7207);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    const Permutation pi = testsupport::random_permutation(rng, n);
    const Permutation sigma = testsupport::random_permutation(rng, n);
    REQUIRE(max_entry_diff(permutation_channel(pi.then(sigma)),
                           compose(permutation_channel(pi), permutation_channel(sigma))) == 0.0);
    REQUIRE(pi.then(pi.inverse()) == Permutation::identity(n));
  }
}

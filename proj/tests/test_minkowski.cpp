#include <cmath>
#include <random>

#include "doctest.h"

#include "bicons/error.hpp"
#include "bicons/minkowski.hpp"

using namespace bicons;

TEST_CASE("inner product carries signature (4,1)") {
  const Vec5 e1{1.0, 0.0, 0.0, 0.0, 0.0};
  const Vec5 e5{0.0, 0.0, 0.0, 0.0, 1.0};
  const Vec5 nullv{1.0, 0.0, 0.0, 0.0, 1.0};
  CHECK(inner(e1, e1) == 1.0);
  CHECK(inner(e5, e5) == -1.0);
  CHECK(inner(nullv, nullv) == 0.0);
  CHECK(inner(e1, e5) == 0.0);
}

TEST_CASE("inner product is bilinear and symmetric") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  auto rand_vec = [&] {
    Vec5 v;
    for (int i = 0; i < 5; ++i) v[i] = dist(rng);
    return v;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const Vec5 x = rand_vec(), y = rand_vec(), z = rand_vec();
    const double a = dist(rng), b = dist(rng);
    CHECK(inner(x, y) == doctest::Approx(inner(y, x)).epsilon(1e-14));
    CHECK(inner(a * x + b * y, z) ==
          doctest::Approx(a * inner(x, z) + b * inner(y, z)).epsilon(1e-12));
  }
}

TEST_CASE("causal classification") {
  CHECK(causal_type({0.0, 0.0, 0.0, 0.0, 1.0}) == CausalType::Timelike);
  CHECK(causal_type({1.0, 0.0, 0.0, 0.0, 1.0}) == CausalType::Null);
  CHECK(causal_type({3.0, 4.0, 0.0, 0.0, 0.0}) == CausalType::Spacelike);

  SUBCASE("scale invariance away from the null cone") {
    const Vec5 x{0.3, -1.2, 0.8, 0.1, 0.4};
    const CausalType base = causal_type(x);
    for (double s : {1e-3, 0.5, 7.0, 1e4}) CHECK(causal_type(s * x) == base);
  }

  SUBCASE("zero vector is rejected") {
    CHECK_THROWS_AS(causal_type({0.0, 0.0, 0.0, 0.0, 0.0}), Error);
    try {
      causal_type({1e-12, 0.0, 0.0, 0.0, 1e-12});
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ZeroVector);
    }
  }
}

TEST_CASE("hyperboloid membership") {
  CHECK(on_hyperboloid({0.0, 0.0, 0.0, 0.0, 1.0}));
  CHECK_FALSE(on_hyperboloid({0.0, 0.0, 0.0, 0.0, -1.0}));
  CHECK(on_hyperboloid({1.0, 0.0, 0.0, 0.0, std::sqrt(2.0)}));
  CHECK_FALSE(on_hyperboloid({1.0, 0.0, 0.0, 0.0, 1.0}));
}

TEST_CASE("gram matrix of frames") {
  const std::array<Vec5, 5> canonical{Vec5{0.0, 0.0, 0.0, 0.0, 1.0},
                                      Vec5{1.0, 0.0, 0.0, 0.0, 0.0},
                                      Vec5{0.0, 1.0, 0.0, 0.0, 0.0},
                                      Vec5{0.0, 0.0, 1.0, 0.0, 0.0},
                                      Vec5{0.0, 0.0, 0.0, 1.0, 0.0}};
  const Mat5 g = gram(canonical);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(g[i][j] == (i == j ? (i == 0 ? -1.0 : 1.0) : 0.0));
  CHECK(max_gram_deviation(canonical) == 0.0);

  SUBCASE("scaled leg shows up in the diagonal") {
    auto frame = canonical;
    frame[1] = 2.0 * frame[1];
    CHECK(gram(frame)[1][1] == 4.0);
    CHECK(max_gram_deviation(frame) == 3.0);
  }
}

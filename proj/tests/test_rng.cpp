#include <doctest.h>

#include <cmath>
#include <vector>

#include "nbcf/rng.hpp"

using namespace nbcf;

TEST_CASE("counter stream is a pure function of (seed, stream, position)") {
  CounterRng a(42, 7), b(42, 7), other_stream(42, 8), other_seed(43, 7);
  for (int n = 0; n < 100; ++n) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != other_stream.next());
    CHECK(x != other_seed.next());
  }
}

TEST_CASE("uniform draws stay in [0, 1) with the right mean") {
  CounterRng rng(1, 0);
  double sum = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n) ~ 6.5e-4
  CHECK(std::abs(sum / n - 0.5) < 5 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("below() covers [0, n) uniformly") {
  CounterRng rng(9, 3);
  std::vector<int> hist(7, 0);
  constexpr int n = 70000;
  for (int i = 0; i < n; ++i) ++hist[rng.below(7)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 5 * std::sqrt(10000.0 * 6.0 / 7.0));
}

TEST_CASE("categorical sampler never emits zero-probability categories") {
  const std::vector<double> p{0.0, 0.5, 0.0, 0.5, 0.0};
  CategoricalSampler sampler(p);
  CounterRng rng(5, 5);
  std::vector<double> counts(p.size(), 0.0);
  sampler.draw_counts(rng, 100000, counts);
  CHECK(counts[0] == 0.0);
  CHECK(counts[2] == 0.0);
  CHECK(counts[4] == 0.0);
  CHECK(counts[1] + counts[3] == 100000.0);
  CHECK(std::abs(counts[1] - 50000.0) < 5 * std::sqrt(100000 * 0.25));
}

TEST_CASE("categorical sampler with a point mass") {
  const std::vector<double> p{1.0};
  CategoricalSampler sampler(p);
  CounterRng rng(0, 0);
  for (int i = 0; i < 100; ++i) CHECK(sampler.draw(rng) == 0);
}

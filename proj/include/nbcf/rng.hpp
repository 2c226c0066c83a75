#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nbcf {

// Counter-based stream: the n-th output is a pure function of
// (seed, stream, n), so results never depend on which thread draws them.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform integer on [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

// Inverse-CDF sampler over a fixed probability vector.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> probabilities);

  std::size_t draw(CounterRng& rng) const noexcept;
  // Adds `trials` draws into counts (counts.size() == categories()).
  void draw_counts(CounterRng& rng, std::uint64_t trials, std::span<double> counts) const noexcept;

  std::size_t categories() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
  std::size_t last_positive_ = 0;
};

}  // namespace nbcf

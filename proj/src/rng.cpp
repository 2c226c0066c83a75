#include "nbcf/rng.hpp"

#include <algorithm>

namespace nbcf {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  // SplitMix64 finalizer.
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) ^ (stream * 0xD1B54A32D192ED03ULL + 1))) {}

std::uint64_t CounterRng::next() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = next();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = next();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

CategoricalSampler::CategoricalSampler(std::span<const double> probabilities)
    : cdf_(probabilities.size()) {
  double running = 0.0;
  for (std::size_t j = 0; j < probabilities.size(); ++j) {
    running += probabilities[j];
    cdf_[j] = running;
    if (probabilities[j] > 0.0) last_positive_ = j;
  }
  // Normalize so rounding in the row sum cannot leave a gap at the top.
  if (running > 0.0) {
    for (double& c : cdf_) c /= running;
  }
}

std::size_t CategoricalSampler::draw(CounterRng& rng) const noexcept {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto j = static_cast<std::size_t>(it - cdf_.begin());
  return std::min(j, last_positive_);
}

void CategoricalSampler::draw_counts(CounterRng& rng, std::uint64_t trials,
                                     std::span<double> counts) const noexcept {
  for (std::uint64_t n = 0; n < trials; ++n) counts[draw(rng)] += 1.0;
}

}  // namespace nbcf

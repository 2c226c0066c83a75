// Serial reference vs OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include <random>

#include "nbcf/kernels.hpp"
#include "nbcf/model.hpp"
#include "nbcf/reference.hpp"
#include "nbcf/theory.hpp"

using namespace nbcf;

namespace {

Corpus make_corpus(std::size_t k, std::size_t v, std::size_t docs) {
  std::mt19937_64 gen(k * 1000 + v);
  std::gamma_distribution<double> g(0.2, 1.0);
  Matrix theta(k, v);
  for (std::size_t i = 0; i < k; ++i) {
    double s = 0;
    for (auto& x : theta.row(i)) s += (x = g(gen) + 1e-9);
    for (auto& x : theta.row(i)) x /= s;
  }
  return generate_synthetic({theta, std::vector<double>(k, 1.0 / k), docs, 150, 7});
}

const Corpus& corpus() {
  static const Corpus c = make_corpus(20, 5000, 4000);
  return c;
}

void BM_fit_reference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::fit_theta(corpus(), Estimator::kNbcf, 0.5, 1.0));
}

void BM_fit_kernels(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fit_nbcf(corpus(), 0.5, 1.0));
}

void BM_predict_reference(benchmark::State& state) {
  const auto model = fit_nbcf(corpus(), 0.5, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::predict_all(model.theta, model.log_priors, corpus().documents));
  }
}

void BM_predict_kernels(benchmark::State& state) {
  const auto model = fit_nbcf(corpus(), 0.5, 1.0);
  for (auto _ : state) {
    const auto log_theta = kernels::log_theta(model.theta);
    benchmark::DoNotOptimize(kernels::predict_all(log_theta, model.log_priors, corpus().documents));
  }
}

const theory::AnalyticSetup& mc_setup() {
  static const theory::AnalyticSetup s{matrix_from_rows({{0.05, 0.10, 0.20, 0.25, 0.40},
                                                         {0.30, 0.25, 0.20, 0.15, 0.10},
                                                         {0.20, 0.20, 0.20, 0.20, 0.20}}),
                                       {1.0 / 3, 1.0 / 3, 1.0 / 3},
                                       120,
                                       50,
                                       1.0};
  return s;
}

void BM_monte_carlo_reference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::monte_carlo(mc_setup(), 500, Estimator::kNbcf, 1));
}

void BM_monte_carlo_kernels(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(theory::monte_carlo(mc_setup(), 500, Estimator::kNbcf, 1));
}

}  // namespace

BENCHMARK(BM_fit_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fit_kernels)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_kernels)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_monte_carlo_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_monte_carlo_kernels)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

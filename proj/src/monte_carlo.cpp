#include <algorithm>
#include <cmath>

#include "nbcf/error.hpp"
#include "nbcf/kernels.hpp"
#include "nbcf/rng.hpp"
#include "nbcf/theory.hpp"

namespace nbcf::theory {

namespace {

constexpr std::size_t kBlock = 256;

Matrix replicate(const std::vector<CategoricalSampler>& rows, const std::vector<std::size_t>& sizes,
                 std::uint64_t doc_length, Estimator estimator, double t, std::uint64_t seed,
                 std::uint64_t replication) {
  const std::size_t k = rows.size();
  const std::size_t v = rows.front().categories();
  CounterRng rng(seed, replication);
  Matrix sums(k, v);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t d = 0; d < sizes[i]; ++d) rows[i].draw_counts(rng, doc_length, sums.row(i));
  }
  return estimator == Estimator::kNb ? kernels::estimate_nb(sums, 0.0) : kernels::estimate_nbcf(sums, t, 0.0);
}

std::vector<CategoricalSampler> samplers(const Matrix& theta) {
  std::vector<CategoricalSampler> rows;
  rows.reserve(theta.rows());
  for (std::size_t i = 0; i < theta.rows(); ++i) rows.emplace_back(theta.row(i));
  return rows;
}

}  // namespace

Matrix monte_carlo_replication(const AnalyticSetup& setup, Estimator estimator, std::uint64_t seed,
                               std::uint64_t replication) {
  const auto sizes = setup.integral_class_sizes();
  return replicate(samplers(setup.theta), sizes, static_cast<std::uint64_t>(setup.doc_length), estimator, setup.t, seed,
                   replication);
}

MonteCarloResult monte_carlo(const AnalyticSetup& setup, std::size_t replications, Estimator estimator,
                             std::uint64_t seed) {
  const auto sizes = setup.integral_class_sizes();
  if (replications < 1) throw Error(ErrorCode::kInvalidSpec, "replications must be >= 1");
  const auto rows = samplers(setup.theta);
  const auto m = static_cast<std::uint64_t>(setup.doc_length);
  const std::size_t k = setup.num_classes();
  const std::size_t v = setup.vocab_size();
  const std::size_t cells = k * v;
  const auto truth = setup.theta.flat();

  // Raw moments of (estimate - theta), accumulated in replication order.
  std::vector<double> a1(cells), a2(cells), a3(cells), a4(cells);
  std::vector<Matrix> block(std::min(kBlock, replications));
  for (std::size_t start = 0; start < replications; start += kBlock) {
    const std::size_t count = std::min(kBlock, replications - start);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(count); ++b) {
      block[b] = replicate(rows, sizes, m, estimator, setup.t, seed, start + static_cast<std::size_t>(b));
    }
    for (std::size_t b = 0; b < count; ++b) {
      const auto est = block[b].flat();
      for (std::size_t c = 0; c < cells; ++c) {
        const double e = est[c] - truth[c];
        const double e2 = e * e;
        a1[c] += e;
        a2[c] += e2;
        a3[c] += e2 * e;
        a4[c] += e2 * e2;
      }
    }
  }

  MonteCarloResult out;
  out.replications = replications;
  out.seed = seed;
  out.estimator = estimator;
  out.t = estimator == Estimator::kNb ? 0.0 : setup.t;
  out.empirical_mean = out.empirical_var = out.empirical_mse = Matrix(k, v);
  out.mean_se = out.var_se = out.mse_se = Matrix(k, v);
  const auto r = static_cast<double>(replications);
  for (std::size_t c = 0; c < cells; ++c) {
    const double m1 = a1[c] / r, m2 = a2[c] / r, m3 = a3[c] / r, m4 = a4[c] / r;
    const double var = std::max(0.0, m2 - m1 * m1);
    const double mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
    out.empirical_mean.flat()[c] = truth[c] + m1;
    out.empirical_var.flat()[c] = var;
    out.empirical_mse.flat()[c] = m2;
    out.mean_se.flat()[c] = std::sqrt(var / r);
    out.var_se.flat()[c] = std::sqrt(std::max(0.0, mu4 - var * var) / r);
    out.mse_se.flat()[c] = std::sqrt(std::max(0.0, m4 - m2 * m2) / r);
  }
  return out;
}

RateResult rate_check(Estimator estimator, std::span<const std::size_t> sample_sizes,
                      const AnalyticSetup& setup_template, std::size_t replications, std::uint64_t seed) {
  if (sample_sizes.size() < 4) throw Error(ErrorCode::kInvalidSpec, "rate check needs at least 4 grid points");
  const std::size_t k = setup_template.num_classes();
  const std::size_t v = setup_template.vocab_size();
  RateResult out;
  out.sample_sizes.assign(sample_sizes.begin(), sample_sizes.end());
  std::vector<Matrix> variances;
  for (std::size_t g = 0; g < sample_sizes.size(); ++g) {
    AnalyticSetup setup = setup_template;
    setup.sample_size = sample_sizes[g];
    const auto mc = monte_carlo(setup, replications, estimator, seed + g);
    double total = 0.0;
    for (double x : mc.empirical_var.flat()) total += x;
    out.total_variance.push_back(total);
    variances.push_back(mc.empirical_var);
  }
  std::vector<double> xs(sample_sizes.begin(), sample_sizes.end());
  out.total = loglog_slope(xs, out.total_variance);
  out.cell_slopes = Matrix(k, v);
  std::vector<double> ys(xs.size());
  for (std::size_t c = 0; c < k * v; ++c) {
    for (std::size_t g = 0; g < xs.size(); ++g) ys[g] = variances[g].flat()[c];
    out.cell_slopes.flat()[c] = loglog_slope(xs, ys).slope;
  }
  return out;
}

}  // namespace nbcf::theory

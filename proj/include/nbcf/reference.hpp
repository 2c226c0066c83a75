#pragma once

// Straightforward serial implementations kept as test oracles and as the
// baseline in bench/. They follow the estimator definitions literally and
// share no code with kernels.hpp beyond the data types.

#include <vector>

#include "nbcf/corpus.hpp"
#include "nbcf/model.hpp"
#include "nbcf/theory.hpp"

namespace nbcf::reference {

/// theta_ij = (alpha + sum_{d in S} w_i(d) x_j) / (v alpha + sum_j sum_{d in S} w_i(d) x_j)
/// with w_i(d) = y_i(d) for nb and y_i(d) + t for nbcf.
Matrix fit_theta(const Corpus& corpus, Estimator estimator, double t, double alpha);

/// Dense evaluation of log P(C_i) + sum_j x_j log theta_ij.
std::vector<double> log_score(const Matrix& theta, std::span<const double> log_priors, const Document& doc);

std::vector<ClassId> predict_all(const Matrix& theta, std::span<const double> log_priors,
                                 std::span<const Document> docs);

/// Class-restricted log-likelihood sum_d w_i(d) sum_j x_j log theta_j of one
/// candidate row, with 0 log 0 = 0.
double row_log_likelihood(const Corpus& corpus, std::size_t class_id, Estimator estimator, double t,
                          std::span<const double> row);

/// Serial Monte Carlo: builds each replication's corpus document by document,
/// fits it with fit_theta and aggregates with a two-pass mean/variance.
theory::MonteCarloResult monte_carlo(const theory::AnalyticSetup& setup, std::size_t replications,
                                     Estimator estimator, std::uint64_t seed);

}  // namespace nbcf::reference

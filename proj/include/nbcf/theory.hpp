#pragma once

// Closed-form bias/variance of the multinomial and correlation-factor
// estimators under fixed document length m, and Monte Carlo checks of them.

#include <cstdint>
#include <optional>
#include <vector>

#include "nbcf/matrix.hpp"
#include "nbcf/model.hpp"

namespace nbcf::theory {

struct AnalyticSetup {
  Matrix theta;               // ground truth, k x v
  std::vector<double> priors; // p_i
  std::size_t sample_size = 0;  // |S|
  double doc_length = 0.0;      // m
  double t = 0.0;

  std::size_t num_classes() const noexcept { return theta.rows(); }
  std::size_t vocab_size() const noexcept { return theta.cols(); }
  /// p_i |S| as a real number.
  double class_size(std::size_t i) const noexcept { return priors[i] * static_cast<double>(sample_size); }

  /// Simplex and range checks; throws DomainError.
  void validate() const;
  /// Additionally requires every p_i |S| to be a positive integer and m to
  /// be integral; throws InvalidSpec.
  std::vector<std::size_t> integral_class_sizes() const;
};

/// theta (1 - theta) / (|C| m).
double nb_variance(double theta, double class_size, double m);

/// Expected value of the correlation-factor estimate of theta_ij.
double nbcf_mean(const AnalyticSetup& setup, std::size_t i, std::size_t j);

/// |sum_l p_l theta_lj - theta_ij| / (1 + p_i / t); 0 at t = 0.
double nbcf_bias(const AnalyticSetup& setup, std::size_t i, std::size_t j);

/// Variance of the correlation-factor estimate in its closed form
///   [p_i (1+2t) s_i + sum_l p_l t^2 s_l] / (m |S| (p_i + t)^2)
/// with s_l = theta_lj (1 - theta_lj) and the pooled sum running over all l.
double nbcf_variance(const AnalyticSetup& setup, std::size_t i, std::size_t j);

/// Same variance assembled term by term: (1+t)^2 for the own class and t^2
/// for every other class. Algebraically equal to nbcf_variance.
double nbcf_variance_expanded(const AnalyticSetup& setup, std::size_t i, std::size_t j);

struct OptimalT {
  enum class Status { kOk, kDegenerate };
  Status status = Status::kOk;
  double value = 0.0;       // the formula's raw value (may be negative / inf / nan)
  bool above_one = false;   // finite positive value >= 1

  bool degenerate() const noexcept { return status == Status::kDegenerate; }
};

/// Variance-minimizing t for cell (i, j):
///   (1 - p_i) s_i / (sum_l p_l s_l - s_i)
/// Degenerate when the denominator vanishes (|.| < 1e-12) with a non-zero
/// numerator, or when the value is negative or non-finite. A zero numerator
/// gives t = 0.
OptimalT optimal_t(const AnalyticSetup& setup, std::size_t i, std::size_t j);

struct MonteCarloResult {
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  Estimator estimator = Estimator::kNb;
  double t = 0.0;
  Matrix empirical_mean;
  Matrix empirical_var;   // 1/R normalization
  Matrix empirical_mse;   // mean squared error against the true theta
  Matrix mean_se;         // sqrt(var / R)
  Matrix var_se;          // sqrt((mu4 - var^2) / R)
  Matrix mse_se;          // standard error of the squared-error average
};

/// Runs R independent fits on fresh corpora with fixed class sizes
/// |C_i| = p_i |S|, fixed length m and alpha = 0. Replication r draws from
/// the stream keyed by (seed, r); aggregation runs in replication order.
MonteCarloResult monte_carlo(const AnalyticSetup& setup, std::size_t replications, Estimator estimator,
                             std::uint64_t seed);

/// Fitted theta for a single replication (exposed for testing).
Matrix monte_carlo_replication(const AnalyticSetup& setup, Estimator estimator, std::uint64_t seed,
                               std::uint64_t replication);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of log(y) on log(x). A constant y (including all
/// zeros) has slope 0. Throws DomainError on non-positive x or on mixed
/// zero/positive y.
SlopeFit loglog_slope(std::span<const double> x, std::span<const double> y);

struct RateResult {
  std::vector<std::size_t> sample_sizes;
  std::vector<double> total_variance;  // sum over cells of empirical variance
  SlopeFit total;                      // slope of total_variance vs |S|
  Matrix cell_slopes;                  // per-cell slope
};

/// Monte Carlo variance at each |S| in the grid (>= 4 points), with the
/// template's priors, m, theta and t. Throws InvalidSpec when a grid point
/// breaks class-size integrality.
RateResult rate_check(Estimator estimator, std::span<const std::size_t> sample_sizes, const AnalyticSetup& setup_template,
                      std::size_t replications, std::uint64_t seed);

}  // namespace nbcf::theory

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbcf/theory.hpp"

namespace nbcf::theory {

// Tolerances shared by the validation report and the acceptance suite.
inline constexpr double kMeanSigmas = 4.0;       // mean / bias agreement, in MC standard errors
inline constexpr double kVarRelative = 0.10;     // variance agreement, relative ...
inline constexpr double kVarSigmas = 5.0;        // ... or in MC standard errors, whichever is looser
inline constexpr double kLowerBoundSigmas = 3.0; // mse >= bias^2 - 3 se

struct ValidationConfig {
  AnalyticSetup setup;  // t is taken from t_values
  std::vector<double> t_values{0.1, 1.0};
  std::size_t replications = 2000;
  std::uint64_t seed = 0;
};

/// Reads the synthetic-spec JSON (theta, priors, docs, doc_length, seed)
/// plus an optional "t" (number or array).
ValidationConfig parse_validation_config(const std::filesystem::path& path);

struct CellCheck {
  std::size_t i = 0, j = 0;
  double truth = 0.0;
  double analytic_mean = 0.0;
  double analytic_var = 0.0;           // closed form as printed
  double analytic_var_expanded = 0.0;  // (1+t)^2 / t^2 term-by-term form
  double analytic_bias = 0.0;
  double mc_mean = 0.0, mc_var = 0.0, mc_mse = 0.0;
  double mean_se = 0.0, var_se = 0.0, mse_se = 0.0;
  double z_mean = 0.0, z_var = 0.0, z_var_expanded = 0.0, z_bias = 0.0;
  bool mean_ok = false, var_ok = false, var_expanded_ok = false, bias_ok = false;
  bool lower_bound_ok = false, var_le_mse_ok = false;
};

struct RunValidation {
  Estimator estimator = Estimator::kNb;
  double t = 0.0;
  std::vector<CellCheck> cells;

  bool all_pass() const;
};

struct ValidationReport {
  ValidationConfig config;
  std::vector<RunValidation> runs;  // nb first, then nbcf per t

  bool all_pass() const;
};

/// |a - b| <= max(rel * |b|, sigmas * se).
bool within_band(double empirical, double analytic, double se, double rel, double sigmas);

/// Compares one Monte Carlo run against the analytic formulas.
RunValidation check_run(const AnalyticSetup& setup, const MonteCarloResult& mc);

ValidationReport validate_theory(const ValidationConfig& config);

nlohmann::json to_json(const ValidationReport& report);
void write_validation_csv(std::ostream& out, const ValidationReport& report);

}  // namespace nbcf::theory

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "nbcf/error.hpp"
#include "nbcf/eval.hpp"
#include "nbcf/validation.hpp"

namespace nbcf::theory {

namespace {

double zscore(double diff, double se) {
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

// JSON has no infinity; such z-scores are written as null.
nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

ValidationConfig parse_validation_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    static const std::vector<std::string> known{"theta", "priors", "docs", "doc_length", "seed", "t"};
    for (const auto& [key, value] : j.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw Error(ErrorCode::kFormat, path.string() + ": unknown key '" + key + "'");
      }
    }
    ValidationConfig config;
    config.setup.theta = matrix_from_rows(j.at("theta").get<std::vector<std::vector<double>>>());
    config.setup.priors = j.at("priors").get<std::vector<double>>();
    config.setup.sample_size = j.at("docs").get<std::size_t>();
    config.setup.doc_length = j.at("doc_length").get<double>();
    config.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("t")) {
      config.t_values = j["t"].is_array() ? j["t"].get<std::vector<double>>() : std::vector<double>{j["t"].get<double>()};
    }
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
}

bool within_band(double empirical, double analytic, double se, double rel, double sigmas) {
  return std::abs(empirical - analytic) <= std::max(rel * std::abs(analytic), sigmas * se);
}

bool RunValidation::all_pass() const {
  for (const auto& c : cells) {
    if (!(c.mean_ok && c.var_ok && c.bias_ok && c.lower_bound_ok && c.var_le_mse_ok)) return false;
  }
  return true;
}

bool ValidationReport::all_pass() const {
  for (const auto& run : runs) {
    if (!run.all_pass()) return false;
  }
  return true;
}

RunValidation check_run(const AnalyticSetup& setup, const MonteCarloResult& mc) {
  AnalyticSetup s = setup;
  s.t = mc.estimator == Estimator::kNb ? 0.0 : mc.t;
  const auto r = static_cast<double>(mc.replications);
  RunValidation run{mc.estimator, s.t, {}};
  for (std::size_t i = 0; i < s.num_classes(); ++i) {
    for (std::size_t j = 0; j < s.vocab_size(); ++j) {
      CellCheck c;
      c.i = i;
      c.j = j;
      c.truth = s.theta(i, j);
      if (mc.estimator == Estimator::kNb) {
        c.analytic_mean = c.truth;
        c.analytic_var = c.analytic_var_expanded = nb_variance(c.truth, s.class_size(i), s.doc_length);
        c.analytic_bias = 0.0;
      } else {
        c.analytic_mean = nbcf_mean(s, i, j);
        c.analytic_var = nbcf_variance(s, i, j);
        c.analytic_var_expanded = nbcf_variance_expanded(s, i, j);
        c.analytic_bias = nbcf_bias(s, i, j);
      }
      c.mc_mean = mc.empirical_mean(i, j);
      c.mc_var = mc.empirical_var(i, j);
      c.mc_mse = mc.empirical_mse(i, j);
      c.mean_se = mc.mean_se(i, j);
      c.var_se = mc.var_se(i, j);
      c.mse_se = mc.mse_se(i, j);

      // The unbiasedness check for nb uses the analytic standard error.
      const double mean_se = mc.estimator == Estimator::kNb ? std::sqrt(c.analytic_var / r) : c.mean_se;
      const double mc_bias = std::abs(c.mc_mean - c.truth);
      c.z_mean = zscore(c.mc_mean - c.analytic_mean, mean_se);
      c.z_bias = zscore(mc_bias - c.analytic_bias, mean_se);
      c.z_var = zscore(c.mc_var - c.analytic_var, c.var_se);
      c.z_var_expanded = zscore(c.mc_var - c.analytic_var_expanded, c.var_se);
      c.mean_ok = std::abs(c.mc_mean - c.analytic_mean) <= kMeanSigmas * mean_se;
      c.bias_ok = std::abs(mc_bias - c.analytic_bias) <= kMeanSigmas * mean_se;
      c.var_ok = within_band(c.mc_var, c.analytic_var, c.var_se, kVarRelative, kVarSigmas);
      c.var_expanded_ok = within_band(c.mc_var, c.analytic_var_expanded, c.var_se, kVarRelative, kVarSigmas);
      c.lower_bound_ok = c.mc_mse >= c.analytic_bias * c.analytic_bias - kLowerBoundSigmas * c.mse_se;
      c.var_le_mse_ok = c.mc_var <= c.mc_mse * (1.0 + 1e-12) + 1e-300;
      run.cells.push_back(c);
    }
  }
  return run;
}

ValidationReport validate_theory(const ValidationConfig& config) {
  ValidationReport report{config, {}};
  AnalyticSetup setup = config.setup;
  setup.t = 0.0;
  report.runs.push_back(check_run(setup, monte_carlo(setup, config.replications, Estimator::kNb, config.seed)));
  for (std::size_t n = 0; n < config.t_values.size(); ++n) {
    setup.t = config.t_values[n];
    const auto mc = monte_carlo(setup, config.replications, Estimator::kNbcf, config.seed + 1 + n);
    report.runs.push_back(check_run(setup, mc));
  }
  return report;
}

nlohmann::json to_json(const ValidationReport& report) {
  using nlohmann::json;
  const auto& s = report.config.setup;
  std::vector<std::vector<double>> theta;
  for (std::size_t i = 0; i < s.num_classes(); ++i) theta.emplace_back(s.theta.row(i).begin(), s.theta.row(i).end());
  json out;
  out["config"] = {{"theta", theta},        {"priors", s.priors},
                   {"docs", s.sample_size}, {"doc_length", s.doc_length},
                   {"t", report.config.t_values}, {"replications", report.config.replications},
                   {"seed", report.config.seed}};
  out["tolerances"] = {{"mean_sigmas", kMeanSigmas},
                       {"var_relative", kVarRelative},
                       {"var_sigmas", kVarSigmas},
                       {"lower_bound_sigmas", kLowerBoundSigmas}};
  json runs = json::array();
  for (const auto& run : report.runs) {
    json entries = json::array();
    bool var_printed = true, var_expanded = true;
    for (const auto& c : run.cells) {
      var_printed = var_printed && c.var_ok;
      var_expanded = var_expanded && c.var_expanded_ok;
      entries.push_back({{"i", c.i},
                         {"j", c.j},
                         {"theta", c.truth},
                         {"analytic_mean", c.analytic_mean},
                         {"analytic_var", c.analytic_var},
                         {"analytic_var_expanded", c.analytic_var_expanded},
                         {"analytic_bias", c.analytic_bias},
                         {"mc_mean", c.mc_mean},
                         {"mc_var", c.mc_var},
                         {"mc_mse", c.mc_mse},
                         {"z_scores",
                          {{"mean", finite_or_null(c.z_mean)},
                           {"bias", finite_or_null(c.z_bias)},
                           {"var", finite_or_null(c.z_var)},
                           {"var_expanded", finite_or_null(c.z_var_expanded)}}},
                         {"pass",
                          {{"mean", c.mean_ok},
                           {"bias", c.bias_ok},
                           {"var", c.var_ok},
                           {"var_expanded", c.var_expanded_ok},
                           {"lower_bound", c.lower_bound_ok},
                           {"var_le_mse", c.var_le_mse_ok}}}});
    }
    runs.push_back({{"estimator", std::string(to_string(run.estimator))},
                    {"t", run.t},
                    {"pass", run.all_pass()},
                    {"variance_form_printed_pass", var_printed},
                    {"variance_form_expanded_pass", var_expanded},
                    {"entries", entries}});
  }
  out["runs"] = runs;
  out["pass"] = report.all_pass();
  return out;
}

void write_validation_csv(std::ostream& out, const ValidationReport& report) {
  using eval::format_double;
  out << "estimator,t,i,j,theta,analytic_mean,analytic_var,analytic_var_expanded,analytic_bias,mc_mean,mc_var,mc_mse,"
         "z_mean,z_bias,z_var,mean_ok,bias_ok,var_ok,var_expanded_ok,lower_bound_ok\n";
  for (const auto& run : report.runs) {
    for (const auto& c : run.cells) {
      out << to_string(run.estimator) << ',' << format_double(run.t) << ',' << c.i << ',' << c.j << ','
          << format_double(c.truth) << ',' << format_double(c.analytic_mean) << ',' << format_double(c.analytic_var)
          << ',' << format_double(c.analytic_var_expanded) << ',' << format_double(c.analytic_bias) << ','
          << format_double(c.mc_mean) << ',' << format_double(c.mc_var) << ',' << format_double(c.mc_mse) << ','
          << format_double(c.z_mean) << ',' << format_double(c.z_bias) << ',' << format_double(c.z_var) << ','
          << c.mean_ok << ',' << c.bias_ok << ',' << c.var_ok << ',' << c.var_expanded_ok << ','
          << c.lower_bound_ok << '\n';
    }
  }
}

}  // namespace nbcf::theory

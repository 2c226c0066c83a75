#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nbcf/corpus.hpp"
#include "nbcf/matrix.hpp"

namespace nbcf {

enum class Estimator { kNb, kNbcf };

std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

struct FitConfig {
  Estimator estimator = Estimator::kNb;
  // Correlation factor added to every label indicator (y -> y + t).
  double t = 0.0;
  // Additive pseudo-count applied to every (class, word) cell.
  double alpha = 1.0;
  // When set, every non-empty document is rescaled to this length before
  // fitting and scoring.
  std::optional<double> normalize_m;

  void validate() const;
  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

struct Model {
  Matrix theta;  // k x v, row-stochastic
  std::vector<double> log_priors;
  Vocabulary vocab;
  FitConfig config;
  std::vector<std::string> class_names;

  std::size_t num_classes() const noexcept { return theta.rows(); }
  std::size_t vocab_size() const noexcept { return theta.cols(); }
};

Model fit_nb(const Corpus& corpus, double alpha);
Model fit_nbcf(const Corpus& corpus, double t, double alpha);
// Dispatches on config.estimator and applies config.normalize_m.
Model fit(const Corpus& corpus, const FitConfig& config);

/// log P(C_i) + sum_j x_j log theta_ij for every class. A class whose theta
/// assigns zero mass to an observed word scores -inf.
std::vector<double> log_score(const Model& model, const Document& doc);

/// Argmax of log_score; ties go to the smallest class id.
ClassId predict(const Model& model, const Document& doc);
ClassId argmax_score(std::span<const double> scores) noexcept;

/// Applies the model's length normalization, if any, to a document about to
/// be scored. Zero-length documents pass through unchanged.
Document prepare_for_scoring(const Model& model, const Document& doc);

inline constexpr int kModelSchemaVersion = 1;

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);
std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

}  // namespace nbcf

#include "nbcf/model.hpp"

#include <cmath>
#include <limits>

#include "nbcf/error.hpp"
#include "nbcf/kernels.hpp"

namespace nbcf {

std::string_view to_string(Estimator e) { return e == Estimator::kNb ? "nb" : "nbcf"; }

Estimator parse_estimator(std::string_view name) {
  if (name == "nb") return Estimator::kNb;
  if (name == "nbcf") return Estimator::kNbcf;
  throw Error(ErrorCode::kUsage, "unknown estimator '" + std::string(name) + "' (expected nb|nbcf)");
}

void FitConfig::validate() const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::kDomain, "t must be a finite value >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::kDomain, "alpha must be a finite value >= 0");
  if (normalize_m && !(*normalize_m > 0.0)) throw Error(ErrorCode::kDomain, "normalize_m must be positive");
}

namespace {

void check_fittable(const Corpus& corpus) {
  if (corpus.num_labeled() == 0) throw Error(ErrorCode::kEmptyCorpus, "corpus has no labeled documents");
  for (std::size_t i = 0; i < corpus.num_classes(); ++i) {
    if (corpus.class_sizes[i] == 0) throw Error(ErrorCode::kEmptyClass, "class '" + corpus.classes[i] + "' has no documents");
  }
}

std::vector<double> empirical_log_priors(const Corpus& corpus) {
  const auto total = static_cast<double>(corpus.num_labeled());
  std::vector<double> out(corpus.num_classes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(static_cast<double>(corpus.class_sizes[i]) / total);
  return out;
}

Model assemble(const Corpus& corpus, Matrix theta, FitConfig config) {
  return Model{std::move(theta), empirical_log_priors(corpus), corpus.vocabulary, std::move(config), corpus.classes};
}

}  // namespace

Model fit_nb(const Corpus& corpus, double alpha) {
  FitConfig config{Estimator::kNb, 0.0, alpha, std::nullopt};
  config.validate();
  check_fittable(corpus);
  return assemble(corpus, kernels::estimate_nb(kernels::class_word_sums(corpus), alpha), config);
}

Model fit_nbcf(const Corpus& corpus, double t, double alpha) {
  FitConfig config{Estimator::kNbcf, t, alpha, std::nullopt};
  config.validate();
  check_fittable(corpus);
  return assemble(corpus, kernels::estimate_nbcf(kernels::class_word_sums(corpus), t, alpha), config);
}

Model fit(const Corpus& corpus, const FitConfig& config) {
  config.validate();
  std::optional<Corpus> normalized;
  if (config.normalize_m) {
    normalized = corpus;
    for (auto& doc : normalized->documents) {
      if (doc.length > 0.0) doc = normalize_length(doc, *config.normalize_m);
    }
  }
  const Corpus& source = normalized ? *normalized : corpus;
  Model model = config.estimator == Estimator::kNb ? fit_nb(source, config.alpha)
                                                   : fit_nbcf(source, config.t, config.alpha);
  model.config = config;
  return model;
}

ClassId argmax_score(std::span<const double> scores) noexcept {
  ClassId best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<ClassId>(i);
  }
  return best;
}

std::vector<double> log_score(const Model& model, const Document& doc) {
  const std::size_t v = model.vocab_size();
  for (const auto& [id, c] : doc.counts) {
    if (id >= v) throw Error(ErrorCode::kVocabMismatch, "word id " + std::to_string(id) + " outside vocabulary of size " + std::to_string(v));
  }
  std::vector<double> scores(model.log_priors);
  for (std::size_t i = 0; i < model.num_classes(); ++i) {
    const auto row = model.theta.row(i);
    for (const auto& [id, c] : doc.counts) {
      if (c == 0.0) continue;
      scores[i] += row[id] > 0.0 ? c * std::log(row[id]) : -std::numeric_limits<double>::infinity();
    }
  }
  return scores;
}

ClassId predict(const Model& model, const Document& doc) { return argmax_score(log_score(model, doc)); }

Document prepare_for_scoring(const Model& model, const Document& doc) {
  if (!model.config.normalize_m || doc.length <= 0.0) return doc;
  return normalize_length(doc, *model.config.normalize_m);
}

}  // namespace nbcf

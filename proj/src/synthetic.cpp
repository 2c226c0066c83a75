#include <cmath>
#include <fstream>

#include <json.hpp>

#include "nbcf/corpus.hpp"
#include "nbcf/error.hpp"
#include "nbcf/rng.hpp"

namespace nbcf {

namespace {

void check_simplex(std::span<const double> p, const std::string& what) {
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) throw Error(ErrorCode::kInvalidSpec, what + " has a negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidSpec, what + " does not sum to 1");
  }
}

}  // namespace

void SyntheticSpec::validate() const {
  if (theta.rows() == 0 || theta.cols() == 0) throw Error(ErrorCode::kInvalidSpec, "theta must be non-empty");
  if (priors.size() != theta.rows()) throw Error(ErrorCode::kInvalidSpec, "priors length must equal the number of theta rows");
  for (std::size_t i = 0; i < theta.rows(); ++i) check_simplex(theta.row(i), "theta row " + std::to_string(i));
  check_simplex(priors, "priors");
  if (docs_per_draw < 1) throw Error(ErrorCode::kInvalidSpec, "docs must be >= 1");
  if (doc_length < 1) throw Error(ErrorCode::kInvalidSpec, "doc_length must be >= 1");
}

SyntheticSpec parse_synthetic_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    SyntheticSpec spec;
    spec.theta = matrix_from_rows(j.at("theta").get<std::vector<std::vector<double>>>());
    spec.priors = j.at("priors").get<std::vector<double>>();
    spec.docs_per_draw = j.at("docs").get<std::size_t>();
    spec.doc_length = j.at("doc_length").get<std::uint64_t>();
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
}

Corpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t k = spec.theta.rows();
  const std::size_t v = spec.theta.cols();

  std::vector<CategoricalSampler> rows;
  rows.reserve(k);
  for (std::size_t i = 0; i < k; ++i) rows.emplace_back(spec.theta.row(i));
  const CategoricalSampler prior_sampler(spec.priors);

  std::vector<std::string> terms(v), classes(k);
  for (std::size_t j = 0; j < v; ++j) terms[j] = synthetic_term(j, v);
  for (std::size_t i = 0; i < k; ++i) classes[i] = synthetic_class(i, k);

  Corpus corpus{Vocabulary(std::move(terms)), std::vector<Document>(spec.docs_per_draw), std::move(classes),
                std::vector<std::size_t>(k, 0), "synthetic-" + std::to_string(spec.seed), 1};

#pragma omp parallel
  {
    std::vector<double> dense(v);
#pragma omp for schedule(static)
    for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(spec.docs_per_draw); ++d) {
      CounterRng rng(spec.seed, static_cast<std::uint64_t>(d));
      const auto label = static_cast<ClassId>(prior_sampler.draw(rng));
      std::fill(dense.begin(), dense.end(), 0.0);
      rows[label].draw_counts(rng, spec.doc_length, dense);
      Document& doc = corpus.documents[d];
      doc.label = label;
      for (std::size_t j = 0; j < v; ++j) {
        if (dense[j] > 0.0) doc.counts.emplace_back(static_cast<WordId>(j), dense[j]);
      }
      doc.length = static_cast<double>(spec.doc_length);
    }
  }
  for (const auto& doc : corpus.documents) ++corpus.class_sizes[*doc.label];
  return corpus;
}

}  // namespace nbcf

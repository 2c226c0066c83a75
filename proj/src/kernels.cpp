#include "nbcf/kernels.hpp"

#include <cmath>
#include <limits>

#include "nbcf/model.hpp"

namespace nbcf::kernels {

Matrix class_word_sums(const Corpus& corpus) {
  const std::size_t k = corpus.num_classes();
  const std::size_t v = corpus.vocabulary.size();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    if (const auto& label = corpus.documents[d].label) members[*label].push_back(d);
  }

  Matrix sums(k, v);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k); ++i) {
    auto row = sums.row(i);
    for (const std::size_t d : members[i]) {
      for (const auto& [id, c] : corpus.documents[d].counts) row[id] += c;
    }
  }
  return sums;
}

namespace {

Matrix normalize_rows(Matrix numer, double alpha) {
  const double v_alpha = static_cast<double>(numer.cols()) * alpha;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(numer.rows()); ++i) {
    auto row = numer.row(i);
    double total = 0.0;
    for (const double x : row) total += x;
    const double denom = v_alpha + total;
    for (double& x : row) x = (alpha + x) / denom;
  }
  return numer;
}

}  // namespace

Matrix estimate_nb(const Matrix& class_sums, double alpha) { return normalize_rows(class_sums, alpha); }

Matrix estimate_nbcf(const Matrix& class_sums, double t, double alpha) {
  const std::size_t k = class_sums.rows();
  const std::size_t v = class_sums.cols();
  std::vector<double> pooled(v, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto row = class_sums.row(i);
    for (std::size_t j = 0; j < v; ++j) pooled[j] += row[j];
  }
  Matrix numer(k, v);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k); ++i) {
    const auto src = class_sums.row(i);
    auto dst = numer.row(i);
    for (std::size_t j = 0; j < v; ++j) dst[j] = src[j] + t * pooled[j];
  }
  return normalize_rows(std::move(numer), alpha);
}

Matrix log_theta(const Matrix& theta) {
  Matrix out(theta.rows(), theta.cols());
  const auto src = theta.flat();
  auto dst = out.flat();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(src.size()); ++n) {
    dst[n] = src[n] > 0.0 ? std::log(src[n]) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<ClassId> predict_all(const Matrix& log_theta, std::span<const double> log_priors,
                                 std::span<const Document> docs) {
  const std::size_t k = log_theta.rows();
  std::vector<ClassId> out(docs.size());
#pragma omp parallel
  {
    std::vector<double> scores(k);
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(docs.size()); ++d) {
      for (std::size_t i = 0; i < k; ++i) {
        const auto row = log_theta.row(i);
        double s = log_priors[i];
        for (const auto& [id, c] : docs[d].counts) s += c * row[id];
        scores[i] = s;
      }
      out[d] = argmax_score(scores);
    }
  }
  return out;
}

}  // namespace nbcf::kernels

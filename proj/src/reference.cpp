#include "nbcf/reference.hpp"

#include <cmath>
#include <limits>

#include "nbcf/rng.hpp"

namespace nbcf::reference {

namespace {

double weight(const Document& doc, std::size_t class_id, Estimator estimator, double t) {
  const double y = (doc.label && *doc.label == class_id) ? 1.0 : 0.0;
  return estimator == Estimator::kNb ? y : y + t;
}

}  // namespace

Matrix fit_theta(const Corpus& corpus, Estimator estimator, double t, double alpha) {
  const std::size_t k = corpus.num_classes();
  const std::size_t v = corpus.vocabulary.size();
  Matrix theta(k, v);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> numer(v, 0.0);
    for (const auto& doc : corpus.documents) {
      if (!doc.label) continue;
      const double w = weight(doc, i, estimator, t);
      for (std::size_t j = 0; j < v; ++j) numer[j] += w * doc.count(static_cast<WordId>(j));
    }
    double denom = static_cast<double>(v) * alpha;
    for (std::size_t j = 0; j < v; ++j) denom += numer[j];
    for (std::size_t j = 0; j < v; ++j) theta(i, j) = (alpha + numer[j]) / denom;
  }
  return theta;
}

std::vector<double> log_score(const Matrix& theta, std::span<const double> log_priors, const Document& doc) {
  std::vector<double> scores(theta.rows());
  for (std::size_t i = 0; i < theta.rows(); ++i) {
    double s = log_priors[i];
    for (std::size_t j = 0; j < theta.cols(); ++j) {
      const double x = doc.count(static_cast<WordId>(j));
      if (x == 0.0) continue;
      s += theta(i, j) == 0.0 ? -std::numeric_limits<double>::infinity() : x * std::log(theta(i, j));
    }
    scores[i] = s;
  }
  return scores;
}

std::vector<ClassId> predict_all(const Matrix& theta, std::span<const double> log_priors,
                                 std::span<const Document> docs) {
  std::vector<ClassId> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    const auto scores = log_score(theta, log_priors, doc);
    ClassId best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
      if (scores[i] > scores[best]) best = static_cast<ClassId>(i);
    }
    out.push_back(best);
  }
  return out;
}

double row_log_likelihood(const Corpus& corpus, std::size_t class_id, Estimator estimator, double t,
                          std::span<const double> row) {
  double ll = 0.0;
  for (const auto& doc : corpus.documents) {
    if (!doc.label) continue;
    const double w = weight(doc, class_id, estimator, t);
    if (w == 0.0) continue;
    for (const auto& [id, x] : doc.counts) {
      if (x == 0.0) continue;
      if (row[id] == 0.0) return -std::numeric_limits<double>::infinity();
      ll += w * x * std::log(row[id]);
    }
  }
  return ll;
}

theory::MonteCarloResult monte_carlo(const theory::AnalyticSetup& setup, std::size_t replications,
                                     Estimator estimator, std::uint64_t seed) {
  const auto sizes = setup.integral_class_sizes();
  const std::size_t k = setup.num_classes();
  const std::size_t v = setup.vocab_size();
  const auto m = static_cast<std::uint64_t>(setup.doc_length);

  std::vector<std::string> terms(v), classes(k);
  for (std::size_t j = 0; j < v; ++j) terms[j] = synthetic_term(j, v);
  for (std::size_t i = 0; i < k; ++i) classes[i] = synthetic_class(i, k);
  const Vocabulary vocab(terms);

  std::vector<Matrix> fits;
  fits.reserve(replications);
  for (std::size_t r = 0; r < replications; ++r) {
    CounterRng rng(seed, r);
    Corpus corpus{vocab, {}, classes, sizes, "mc", 1};
    for (std::size_t i = 0; i < k; ++i) {
      const CategoricalSampler sampler(setup.theta.row(i));
      for (std::size_t d = 0; d < sizes[i]; ++d) {
        std::vector<double> dense(v, 0.0);
        for (std::uint64_t n = 0; n < m; ++n) dense[sampler.draw(rng)] += 1.0;
        Document doc;
        doc.label = static_cast<ClassId>(i);
        for (std::size_t j = 0; j < v; ++j) {
          if (dense[j] > 0.0) doc.counts.emplace_back(static_cast<WordId>(j), dense[j]);
        }
        doc.length = static_cast<double>(m);
        corpus.documents.push_back(std::move(doc));
      }
    }
    fits.push_back(fit_theta(corpus, estimator, setup.t, 0.0));
  }

  theory::MonteCarloResult out;
  out.replications = replications;
  out.seed = seed;
  out.estimator = estimator;
  out.t = estimator == Estimator::kNb ? 0.0 : setup.t;
  out.empirical_mean = out.empirical_var = out.empirical_mse = Matrix(k, v);
  out.mean_se = out.var_se = out.mse_se = Matrix(k, v);
  const auto rr = static_cast<double>(replications);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < v; ++j) {
      double mean = 0.0;
      for (const auto& f : fits) mean += f(i, j);
      mean /= rr;
      double var = 0.0, mse = 0.0, c4 = 0.0, sq4 = 0.0;
      for (const auto& f : fits) {
        const double dev = f(i, j) - mean;
        const double err = f(i, j) - setup.theta(i, j);
        var += dev * dev;
        c4 += dev * dev * dev * dev;
        mse += err * err;
        sq4 += err * err * err * err;
      }
      var /= rr;
      mse /= rr;
      c4 /= rr;
      sq4 /= rr;
      out.empirical_mean(i, j) = mean;
      out.empirical_var(i, j) = var;
      out.empirical_mse(i, j) = mse;
      out.mean_se(i, j) = std::sqrt(var / rr);
      out.var_se(i, j) = std::sqrt(std::max(0.0, c4 - var * var) / rr);
      out.mse_se(i, j) = std::sqrt(std::max(0.0, sq4 - mse * mse) / rr);
    }
  }
  return out;
}

}  // namespace nbcf::reference

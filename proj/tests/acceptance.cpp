// Acceptance suite: one PASS / FAIL / SKIP line per criterion.
// Exit 0 when nothing failed, 1 on any failure, 77 when every selected
// criterion was skipped.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "nbcf/eval.hpp"
#include "nbcf/model.hpp"
#include "nbcf/reference.hpp"
#include "nbcf/theory.hpp"
#include "nbcf/validation.hpp"
#include "test_support.hpp"

using namespace nbcf;
namespace fs = std::filesystem;

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) { return {ok ? Verdict::kPass : Verdict::kFail, std::move(detail)}; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome estimator_identity() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(20240501);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + gen() % 4, v = 1 + gen() % 20, docs = k + gen() % 12;
    const auto corpus = testing::random_corpus(gen, k, v, docs, 5, false);
    const double alpha = trial % 2 ? 1.0 : 0.5 * (trial % 5);
    const auto nb = fit_nb(corpus, alpha);
    const auto cf = fit_nbcf(corpus, 0.0, alpha);
    for (std::size_t n = 0; n < nb.theta.flat().size(); ++n) {
      worst = std::max(worst, std::abs(nb.theta.flat()[n] - cf.theta.flat()[n]));
    }
  }
  const double secs = seconds_since(start);
  return pass_if(worst <= 1e-12 && secs < 1.0, fmt("max |nbcf(t=0) - nb| = %.3g, %.3f s", worst, secs));
}

// Best log-likelihood over the simplex grid with the given step.
double grid_best(const Corpus& corpus, std::size_t i, Estimator est, double t, int steps) {
  const std::size_t v = corpus.vocabulary.size();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> row(v);
  if (v == 1) return reference::row_log_likelihood(corpus, i, est, t, std::vector<double>{1.0});
  for (int a = 0; a <= steps; ++a) {
    if (v == 2) {
      row = {a / double(steps), (steps - a) / double(steps)};
      best = std::max(best, reference::row_log_likelihood(corpus, i, est, t, row));
      continue;
    }
    for (int b = 0; a + b <= steps; ++b) {
      row = {a / double(steps), b / double(steps), (steps - a - b) / double(steps)};
      best = std::max(best, reference::row_log_likelihood(corpus, i, est, t, row));
    }
  }
  return best;
}

Outcome mle_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(77001);
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t v = 1 + trial % 3, k = 1 + gen() % 2, docs = k + gen() % (5 - k);
    const auto corpus = testing::random_corpus(gen, k, v, docs, 4, false);
    const double t = 0.25 + 0.25 * (trial % 4);
    for (auto est : {Estimator::kNb, Estimator::kNbcf}) {
      const auto model = est == Estimator::kNb ? fit_nb(corpus, 0.0) : fit_nbcf(corpus, t, 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        const double fitted = reference::row_log_likelihood(corpus, i, est, t, model.theta.row(i));
        worst = std::max(worst, grid_best(corpus, i, est, t, 1000) - fitted);
      }
    }
  }
  const double secs = seconds_since(start);
  return pass_if(worst <= 1e-9 && secs < 30.0,
                 fmt("max (grid best - fitted) log-likelihood = %.3g, %.2f s", worst, secs));
}

theory::ValidationConfig theorem_config() {
  return {{matrix_from_rows({{0.05, 0.10, 0.20, 0.25, 0.40},
                             {0.30, 0.25, 0.20, 0.15, 0.10},
                             {0.20, 0.20, 0.20, 0.20, 0.20}}),
           {1.0 / 3, 1.0 / 3, 1.0 / 3},
           120,
           50,
           0.0},
          {0.1, 1.0},
          2000,
          424242};
}

// Criteria 3-6 share one validation run.
struct TheoremRuns {
  theory::ValidationReport report;
  double seconds = 0.0;
};

const TheoremRuns& theorem_runs() {
  static const TheoremRuns runs = [] {
    const auto start = std::chrono::steady_clock::now();
    TheoremRuns r{theory::validate_theory(theorem_config())};
    r.seconds = seconds_since(start);
    return r;
  }();
  return runs;
}

Outcome nb_unbiased() {
  const auto& runs = theorem_runs();
  const auto& nb = runs.report.runs.front();
  const auto& setup = runs.report.config.setup;
  const double r = static_cast<double>(runs.report.config.replications);
  std::size_t bad = 0;
  double worst = 0.0;
  for (const auto& c : nb.cells) {
    const double bound = theory::kMeanSigmas * std::sqrt(c.truth * (1 - c.truth) / (setup.class_size(c.i) * setup.doc_length * r));
    const double dev = std::abs(c.mc_mean - c.truth);
    worst = std::max(worst, dev / bound);
    if (dev > bound) ++bad;
  }
  return pass_if(bad == 0 && runs.seconds < 60.0,
                 fmt("%zu/%zu cells outside 4 SE (max ratio %.3f), theorem runs %.2f s", bad, nb.cells.size(), worst,
                     runs.seconds));
}

Outcome nb_variance() {
  const auto& nb = theorem_runs().report.runs.front();
  std::size_t bad = 0;
  for (const auto& c : nb.cells) bad += !c.var_ok;
  return pass_if(bad == 0, fmt("%zu/%zu cells outside max(10%%, 5 SE)", bad, nb.cells.size()));
}

Outcome nbcf_mean_bias() {
  std::ostringstream detail;
  bool ok = true;
  for (const auto& run : theorem_runs().report.runs) {
    if (run.estimator != Estimator::kNbcf) continue;
    std::size_t bad_mean = 0, bad_bias = 0;
    for (const auto& c : run.cells) {
      bad_mean += !c.mean_ok;
      bad_bias += !c.bias_ok;
    }
    ok = ok && bad_mean == 0 && bad_bias == 0;
    detail << fmt("t=%g: %zu mean / %zu bias misses; ", run.t, bad_mean, bad_bias);
  }
  return pass_if(ok, detail.str());
}

Outcome nbcf_variance() {
  std::ostringstream detail;
  bool printed_ok = true, expanded_ok = true;
  for (const auto& run : theorem_runs().report.runs) {
    if (run.estimator != Estimator::kNbcf) continue;
    std::size_t bad = 0, bad_expanded = 0;
    for (const auto& c : run.cells) {
      bad += !c.var_ok;
      bad_expanded += !c.var_expanded_ok;
    }
    printed_ok = printed_ok && bad == 0;
    expanded_ok = expanded_ok && bad_expanded == 0;
    detail << fmt("t=%g: printed form %zu misses, expanded form %zu misses; ", run.t, bad, bad_expanded);
  }
  return pass_if(printed_ok, detail.str());
}

Outcome rate() {
  const auto start = std::chrono::steady_clock::now();
  const theory::AnalyticSetup setup{matrix_from_rows({{0.1, 0.2, 0.3, 0.4},
                                                      {0.4, 0.3, 0.2, 0.1},
                                                      {0.25, 0.25, 0.25, 0.25}}),
                                    {0.25, 0.25, 0.5},
                                    0,
                                    20,
                                    1.0};
  const std::vector<std::size_t> grid{200, 400, 800, 1600};
  const auto r = theory::rate_check(Estimator::kNbcf, grid, setup, 2000, 90210);
  double lo = r.total.slope, hi = r.total.slope;
  for (double s : r.cell_slopes.flat()) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double secs = seconds_since(start);
  const bool ok = lo >= -1.15 && hi <= -0.85 && secs < 300.0;
  return pass_if(ok, fmt("total slope %.4f (se %.4f), cell slopes in [%.4f, %.4f], %.1f s", r.total.slope,
                         r.total.std_error, lo, hi, secs));
}

Outcome newsgroups(const std::string& dir) {
  if (dir.empty() || !fs::is_directory(dir)) {
    return {Verdict::kSkip, "20-Newsgroups subset not found at '" + dir + "'"};
  }
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = load_corpus(dir, CorpusFormat::kDirTree, 2);
  const eval::SplitSpec spec{0.1, 1};
  const auto nb = eval::run_experiment(corpus, spec, {Estimator::kNb, 0.0, 1.0}, eval::EvalOn::kTest);
  const auto cf = eval::run_experiment(corpus, spec, {Estimator::kNbcf, 1.0, 1.0}, eval::EvalOn::kTest);
  const auto nb_train = eval::run_experiment(corpus, spec, {Estimator::kNb, 0.0, 1.0}, eval::EvalOn::kTrain);
  const auto cf_train = eval::run_experiment(corpus, spec, {Estimator::kNbcf, 1.0, 1.0}, eval::EvalOn::kTrain);
  const auto sweep = eval::sweep_t(corpus, spec, cli::parse_grid("0:2:0.1"), 1.0);
  std::size_t best = 0;
  for (std::size_t n = 1; n < sweep.reports.size(); ++n) {
    if (sweep.reports[n].macro_accuracy > sweep.reports[best].macro_accuracy) best = n;
  }
  const double secs = seconds_since(start);
  const bool test_ok = cf.macro_accuracy >= nb.macro_accuracy;
  const bool train_ok = nb_train.micro_accuracy >= cf_train.micro_accuracy;
  const bool sweep_ok = sweep.grid[best] < 1.0;
  return pass_if(test_ok && train_ok && sweep_ok && secs < 300.0,
                 fmt("%zu docs, %zu classes; test macro nb %.4f nbcf %.4f; train nb %.4f nbcf %.4f; sweep argmax t=%g; "
                     "%.1f s",
                     corpus.documents.size(), corpus.num_classes(), nb.macro_accuracy, cf.macro_accuracy,
                     nb_train.micro_accuracy, cf_train.micro_accuracy, sweep.grid[best], secs));
}

Outcome serialization() {
  std::mt19937_64 gen(9009);
  std::uniform_real_distribution<double> unit(0.0, 3.0);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + gen() % 5, v = 1 + gen() % 30;
    const auto corpus = testing::random_corpus(gen, k, v, k + gen() % 20, 7, false);
    FitConfig config{trial % 2 ? Estimator::kNbcf : Estimator::kNb, trial % 2 ? unit(gen) : 0.0, unit(gen)};
    if (trial % 7 == 0) config.normalize_m = 1.0 + unit(gen);
    const auto model = fit(corpus, config);
    const auto text = model_to_json(model);
    const auto back = model_from_json(text);
    const bool same = back.theta == model.theta && back.log_priors == model.log_priors && back.vocab == model.vocab &&
                      back.class_names == model.class_names && back.config.t == model.config.t &&
                      back.config.alpha == model.config.alpha && back.config.normalize_m == model.config.normalize_m &&
                      back.config.estimator == model.config.estimator && model_to_json(back) == text;
    mismatches += !same;
  }

  std::mt19937_64 cgen(31);
  const auto corpus = testing::random_corpus(cgen, 3, 12, 90, 4, false);
  auto csv = [&](std::uint64_t seed) {
    std::ostringstream out;
    eval::write_report_csv(out, eval::run_experiment(corpus, {0.3, seed}, {Estimator::kNbcf, 0.5, 1.0},
                                                     eval::EvalOn::kTest));
    return out.str();
  };
  const bool csv_same = csv(5) == csv(5);
  const auto a = eval::split(corpus, {0.3, 5}), b = eval::split(corpus, {0.3, 5});
  const bool split_same = a.train_indices == b.train_indices && a.test_indices == b.test_indices;
  return pass_if(mismatches == 0 && csv_same && split_same,
                 fmt("%zu/100 round-trip mismatches; csv identical: %s; split identical: %s", mismatches,
                     csv_same ? "yes" : "no", split_same ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nbcf acceptance suite"};
  std::set<int> skip, only;
  std::string news_dir;
  app.add_option("--skip", skip, "Criteria to leave out");
  app.add_option("--only", only, "Run just these criteria");
  app.add_option("--newsgroups", news_dir, "20-Newsgroups subset in dirtree layout");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"estimator identity", estimator_identity},
      {"mle oracle", mle_oracle},
      {"nb unbiased", nb_unbiased},
      {"nb variance", nb_variance},
      {"nbcf mean and bias", nbcf_mean_bias},
      {"nbcf variance", nbcf_variance},
      {"variance rate", rate},
      {"newsgroups directional", [&] { return newsgroups(news_dir); }},
      {"serialization and determinism", serialization},
  };

  int ran = 0, failed = 0, skipped = 0;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    const int id = static_cast<int>(n) + 1;
    if (skip.count(id) || (!only.empty() && !only.count(id))) continue;
    Outcome o;
    try {
      o = criteria[n].second();
    } catch (const std::exception& e) {
      o = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::kPass ? "PASS" : o.verdict == Verdict::kFail ? "FAIL" : "SKIP";
    std::printf("[%s] %d. %s: %s\n", tag, id, criteria[n].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    ++ran;
    failed += o.verdict == Verdict::kFail;
    skipped += o.verdict == Verdict::kSkip;
  }
  if (failed) return 1;
  if (ran > 0 && skipped == ran) return 77;
  return 0;
}

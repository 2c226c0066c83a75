#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbcf/corpus.hpp"
#include "nbcf/model.hpp"

namespace nbcf::eval {

struct SplitSpec {
  double train_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct Split {
  Corpus train;
  Corpus test;
  // Positions in the source corpus, per output document.
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

/// Stratified split: ceil(fraction * |C_i|) documents of each class go to
/// train, picked by a shuffle of the class's indices keyed by (seed, class).
/// Both halves are re-vectorized against a vocabulary rebuilt from the train
/// half with the corpus min_df; test words outside it are dropped.
/// Throws SplitInfeasible when a class would end up with no train or no
/// test document.
Split split(const Corpus& corpus, const SplitSpec& spec);

enum class EvalOn { kTest, kTrain };
std::string_view to_string(EvalOn e);
EvalOn parse_eval_on(std::string_view name);

struct ExperimentReport {
  std::string corpus;
  Estimator estimator = Estimator::kNb;
  double t = 0.0;
  double alpha = 0.0;
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  EvalOn eval_on = EvalOn::kTest;

  std::vector<std::string> class_names;
  std::vector<std::size_t> class_sizes;
  std::vector<double> per_class_accuracy;  // recall within each class
  double macro_accuracy = 0.0;
  double micro_accuracy = 0.0;
};

/// Scores every labeled document of `view`. The view must be vectorized
/// against the model vocabulary and share its class list (VocabMismatch
/// otherwise); a class with no documents raises EmptyClass.
ExperimentReport evaluate(const Model& model, const Corpus& view, EvalOn eval_on);

/// Split once, fit with `config`, evaluate on the chosen half.
ExperimentReport run_experiment(const Corpus& corpus, const SplitSpec& split_spec, const FitConfig& config,
                                EvalOn eval_on);

struct SweepResult {
  std::vector<double> grid;
  std::vector<ExperimentReport> reports;
};

/// One NB-CF fit per t on the same split; grid must be strictly increasing
/// and non-negative.
SweepResult sweep_t(const Corpus& corpus, const SplitSpec& split_spec, const std::vector<double>& grid, double alpha,
                    EvalOn eval_on = EvalOn::kTest);

struct Comparison {
  std::vector<double> per_class_delta;  // b - a
  double macro_delta = 0.0;
  double micro_delta = 0.0;
  std::size_t wins = 0;    // classes where b beats a
  std::size_t losses = 0;
  std::size_t ties = 0;
};

/// Throws ConfigMismatch unless both reports describe the same corpus,
/// split and class list.
Comparison compare(const ExperimentReport& a, const ExperimentReport& b);

inline constexpr const char* kReportCsvHeader =
    "corpus,estimator,t,alpha,train_fraction,seed,eval_on,class_name,class_size,accuracy";

/// One row per class plus "__macro__" and "__micro__" summary rows.
void write_report_csv(std::ostream& out, const ExperimentReport& report, bool header = true);
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

/// Shortest decimal that round-trips.
std::string format_double(double x);

}  // namespace nbcf::eval

#include "nbcf/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "nbcf/error.hpp"
#include "nbcf/kernels.hpp"
#include "nbcf/rng.hpp"

namespace nbcf::eval {

namespace {

std::vector<std::size_t> shuffled(std::vector<std::size_t> items, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  for (std::size_t n = items.size(); n > 1; --n) {
    const auto j = static_cast<std::size_t>(rng.below(n));
    std::swap(items[n - 1], items[j]);
  }
  return items;
}

// Re-vectorizes documents of `source` under `vocab`, given old id -> new id.
Corpus project(const Corpus& source, const std::vector<std::size_t>& indices, const Vocabulary& vocab,
               const std::vector<std::int64_t>& remap) {
  Corpus out{vocab, {}, source.classes, std::vector<std::size_t>(source.num_classes(), 0), source.name, source.min_df};
  out.documents.reserve(indices.size());
  for (const std::size_t d : indices) {
    const Document& src = source.documents[d];
    Document doc;
    doc.label = src.label;
    for (const auto& [id, c] : src.counts) {
      if (remap[id] >= 0) {
        doc.counts.emplace_back(static_cast<WordId>(remap[id]), c);
        doc.length += c;
      }
    }
    if (doc.label) ++out.class_sizes[*doc.label];
    out.documents.push_back(std::move(doc));
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Split split(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error(ErrorCode::kDomain, "train_fraction must lie in (0, 1)");
  }
  const std::size_t k = corpus.num_classes();
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    if (const auto& label = corpus.documents[d].label) members[*label].push_back(d);
  }

  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t n = members[i].size();
    const auto n_train = static_cast<std::size_t>(std::ceil(spec.train_fraction * static_cast<double>(n) - 1e-9));
    if (n_train == 0 || n_train >= n) {
      throw Error(ErrorCode::kSplitInfeasible, "class '" + corpus.classes[i] + "' with " + std::to_string(n) +
                                                   " documents cannot be split at fraction " +
                                                   format_double(spec.train_fraction));
    }
    const auto order = shuffled(members[i], spec.seed, i);
    train_idx.insert(train_idx.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_idx.insert(test_idx.end(), order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  // Vocabulary from the train half only, same document-frequency rule.
  std::vector<int> df(corpus.vocabulary.size(), 0);
  for (const std::size_t d : train_idx) {
    for (const auto& [id, c] : corpus.documents[d].counts) {
      if (c > 0.0) ++df[id];
    }
  }
  std::vector<std::string> terms;
  std::vector<std::int64_t> remap(corpus.vocabulary.size(), -1);
  for (std::size_t j = 0; j < df.size(); ++j) {
    if (df[j] >= corpus.min_df) {
      remap[j] = static_cast<std::int64_t>(terms.size());
      terms.push_back(corpus.vocabulary.term(static_cast<WordId>(j)));
    }
  }
  if (terms.empty()) throw Error(ErrorCode::kEmptyVocabulary, "training split leaves an empty vocabulary");
  const Vocabulary vocab(std::move(terms));

  Split out{project(corpus, train_idx, vocab, remap), project(corpus, test_idx, vocab, remap), train_idx, test_idx};
  return out;
}

std::string_view to_string(EvalOn e) { return e == EvalOn::kTest ? "test" : "train"; }

EvalOn parse_eval_on(std::string_view name) {
  if (name == "test") return EvalOn::kTest;
  if (name == "train") return EvalOn::kTrain;
  throw Error(ErrorCode::kUsage, "eval-on must be test|train, got '" + std::string(name) + "'");
}

ExperimentReport evaluate(const Model& model, const Corpus& view, EvalOn eval_on) {
  if (!(view.vocabulary == model.vocab)) throw Error(ErrorCode::kVocabMismatch, "corpus vocabulary differs from the model's");
  if (view.classes != model.class_names) throw Error(ErrorCode::kVocabMismatch, "corpus classes differ from the model's");

  std::vector<Document> docs;
  std::vector<ClassId> truth;
  for (const auto& doc : view.documents) {
    if (!doc.label) continue;
    for (const auto& [id, c] : doc.counts) {
      if (id >= model.vocab_size()) throw Error(ErrorCode::kVocabMismatch, "word id outside the model vocabulary");
    }
    docs.push_back(prepare_for_scoring(model, doc));
    truth.push_back(*doc.label);
  }
  const auto predicted = kernels::predict_all(kernels::log_theta(model.theta), model.log_priors, docs);

  const std::size_t k = model.num_classes();
  std::vector<std::size_t> correct(k, 0), sizes(k, 0);
  for (std::size_t n = 0; n < truth.size(); ++n) {
    ++sizes[truth[n]];
    if (predicted[n] == truth[n]) ++correct[truth[n]];
  }

  ExperimentReport report;
  report.corpus = view.name;
  report.estimator = model.config.estimator;
  report.t = model.config.t;
  report.alpha = model.config.alpha;
  report.eval_on = eval_on;
  report.class_names = model.class_names;
  report.class_sizes = sizes;
  std::size_t total_correct = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (sizes[i] == 0) throw Error(ErrorCode::kEmptyClass, "class '" + model.class_names[i] + "' has no documents to evaluate");
    const double acc = static_cast<double>(correct[i]) / static_cast<double>(sizes[i]);
    report.per_class_accuracy.push_back(acc);
    report.macro_accuracy += acc;
    total_correct += correct[i];
  }
  report.macro_accuracy /= static_cast<double>(k);
  report.micro_accuracy = static_cast<double>(total_correct) / static_cast<double>(truth.size());
  return report;
}

namespace {

ExperimentReport evaluate_split(const Split& s, const SplitSpec& split_spec, const FitConfig& config, EvalOn eval_on) {
  const Model model = fit(s.train, config);
  auto report = evaluate(model, eval_on == EvalOn::kTest ? s.test : s.train, eval_on);
  report.train_fraction = split_spec.train_fraction;
  report.seed = split_spec.seed;
  return report;
}

}  // namespace

ExperimentReport run_experiment(const Corpus& corpus, const SplitSpec& split_spec, const FitConfig& config,
                                EvalOn eval_on) {
  return evaluate_split(split(corpus, split_spec), split_spec, config, eval_on);
}

SweepResult sweep_t(const Corpus& corpus, const SplitSpec& split_spec, const std::vector<double>& grid, double alpha,
                    EvalOn eval_on) {
  if (grid.empty()) throw Error(ErrorCode::kUsage, "sweep grid is empty");
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!(grid[n] >= 0.0)) throw Error(ErrorCode::kDomain, "sweep grid values must be >= 0");
    if (n > 0 && !(grid[n] > grid[n - 1])) throw Error(ErrorCode::kUsage, "sweep grid must be strictly increasing");
  }
  const Split s = split(corpus, split_spec);
  SweepResult out{grid, {}};
  for (const double t : grid) {
    out.reports.push_back(evaluate_split(s, split_spec, FitConfig{Estimator::kNbcf, t, alpha, std::nullopt}, eval_on));
  }
  return out;
}

Comparison compare(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.corpus != b.corpus || a.train_fraction != b.train_fraction || a.seed != b.seed || a.eval_on != b.eval_on ||
      a.class_names != b.class_names || a.class_sizes != b.class_sizes) {
    throw Error(ErrorCode::kConfigMismatch, "reports come from different corpora, splits or evaluation sets");
  }
  Comparison c;
  for (std::size_t i = 0; i < a.per_class_accuracy.size(); ++i) {
    const double d = b.per_class_accuracy[i] - a.per_class_accuracy[i];
    c.per_class_delta.push_back(d);
    if (d > 0.0) {
      ++c.wins;
    } else if (d < 0.0) {
      ++c.losses;
    } else {
      ++c.ties;
    }
  }
  c.macro_delta = b.macro_accuracy - a.macro_accuracy;
  c.micro_delta = b.micro_accuracy - a.micro_accuracy;
  return c;
}

void write_report_csv(std::ostream& out, const ExperimentReport& r, bool header) {
  if (header) out << kReportCsvHeader << '\n';
  const std::string prefix = csv_field(r.corpus) + ',' + std::string(to_string(r.estimator)) + ',' + format_double(r.t) +
                             ',' + format_double(r.alpha) + ',' + format_double(r.train_fraction) + ',' +
                             std::to_string(r.seed) + ',' + std::string(to_string(r.eval_on)) + ',';
  std::size_t total = 0;
  for (std::size_t i = 0; i < r.class_names.size(); ++i) {
    out << prefix << csv_field(r.class_names[i]) << ',' << r.class_sizes[i] << ','
        << format_double(r.per_class_accuracy[i]) << '\n';
    total += r.class_sizes[i];
  }
  out << prefix << "__macro__," << total << ',' << format_double(r.macro_accuracy) << '\n';
  out << prefix << "__micro__," << total << ',' << format_double(r.micro_accuracy) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << kReportCsvHeader << '\n';
  for (const auto& report : sweep.reports) write_report_csv(out, report, false);
}

}  // namespace nbcf::eval

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nbcf/matrix.hpp"

namespace nbcf {

using WordId = std::uint32_t;
using ClassId = std::uint32_t;
using Token = std::string;

/// Lowercases ASCII, splits on every maximal run of non-alphanumeric bytes
/// and keeps pieces of length >= 2. Non-ASCII bytes act as separators.
std::vector<Token> tokenize(std::string_view raw_text);

/// Ordered set of distinct terms with dense ids. Terms are kept in
/// lexicographic order; id i is the i-th term. Never empty.
class Vocabulary {
 public:
  /// Throws EmptyVocabulary when `terms` is empty and FormatError when it
  /// is not strictly increasing.
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const noexcept { return terms_.size(); }
  const std::string& term(WordId id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::optional<WordId> find(std::string_view term) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, WordId> index_;
};

/// Terms that occur in at least `min_df` distinct documents.
Vocabulary build_vocabulary(const std::vector<std::vector<Token>>& docs, int min_df);

struct Document {
  /// Sparse counts sorted by word id; every stored count is > 0.
  std::vector<std::pair<WordId, double>> counts;
  std::optional<ClassId> label;
  double length = 0.0;

  double count(WordId id) const noexcept;
  friend bool operator==(const Document&, const Document&) = default;
};

/// Counts in-vocabulary tokens; out-of-vocabulary tokens are dropped.
Document vectorize(const std::vector<Token>& tokens, const Vocabulary& vocab);

/// Scales counts so the document length becomes `m`.
/// Throws ZeroLengthDocument for an empty document, DomainError for m <= 0.
Document normalize_length(const Document& doc, double m);

struct Corpus {
  Vocabulary vocabulary;
  std::vector<Document> documents;
  std::vector<std::string> classes;
  std::vector<std::size_t> class_sizes;
  std::string name;
  int min_df = 1;

  std::size_t num_classes() const noexcept { return classes.size(); }
  std::size_t num_labeled() const noexcept;
  /// Checks the structural invariants; throws FormatError on violation.
  void validate() const;
};

enum class CorpusFormat { kJsonl, kDirTree };

CorpusFormat parse_corpus_format(std::string_view name);

/// Labeled texts before vectorization.
struct RawDocument {
  std::string label;
  std::string text;
};

std::vector<RawDocument> read_jsonl(const std::filesystem::path& path);
std::vector<RawDocument> read_dirtree(const std::filesystem::path& root,
                                      std::vector<std::string>* class_dirs = nullptr);

/// Tokenizes, builds the vocabulary over all texts and vectorizes.
/// `extra_classes` are class names that exist even if they hold no document.
Corpus build_corpus(const std::vector<RawDocument>& raw, int min_df, std::string name,
                    const std::vector<std::string>& extra_classes = {});

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, int min_df);

struct SyntheticSpec {
  Matrix theta;
  std::vector<double> priors;
  std::size_t docs_per_draw = 0;
  std::uint64_t doc_length = 0;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec on a non-simplex row or prior vector.
  void validate() const;
};

SyntheticSpec parse_synthetic_spec(const std::filesystem::path& path);

/// Deterministic: document d is drawn from the stream keyed by (seed, d).
/// Synthetic terms are "w<id>" and classes "c<id>", zero padded so that
/// lexicographic order matches id order.
Corpus generate_synthetic(const SyntheticSpec& spec);

std::string synthetic_term(std::size_t id, std::size_t vocab_size);
std::string synthetic_class(std::size_t id, std::size_t num_classes);

/// Writes a corpus as JSONL ({"label","text"} per document) such that
/// loading it back with min_df=1 reproduces the counts.
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace nbcf

#include <algorithm>
#include <map>
#include <set>

#include "nbcf/corpus.hpp"
#include "nbcf/error.hpp"

namespace nbcf {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

}  // namespace

std::vector<Token> tokenize(std::string_view raw_text) {
  std::vector<Token> tokens;
  std::string piece;
  auto flush = [&] {
    if (piece.size() >= 2) tokens.push_back(piece);
    piece.clear();
  };
  for (const char ch : raw_text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      piece.push_back(lower(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error(ErrorCode::kEmptyVocabulary, "vocabulary is empty");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw Error(ErrorCode::kFormat, "vocabulary terms must be strictly increasing: '" + terms_[i] + "'");
    }
    index_.emplace(terms_[i], static_cast<WordId>(i));
  }
}

std::optional<WordId> Vocabulary::find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const std::vector<std::vector<Token>>& docs, int min_df) {
  if (min_df < 1) throw Error(ErrorCode::kDomain, "min_df must be >= 1");
  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    const std::set<std::string_view> distinct(doc.begin(), doc.end());
    for (const auto term : distinct) ++df[std::string(term)];
  }
  std::vector<std::string> terms;
  for (const auto& [term, n] : df) {
    if (n >= min_df) terms.push_back(term);
  }
  if (terms.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary, "no token appears in at least " + std::to_string(min_df) + " documents");
  }
  return Vocabulary(std::move(terms));
}

double Document::count(WordId id) const noexcept {
  const auto it = std::lower_bound(counts.begin(), counts.end(), id,
                                   [](const auto& entry, WordId w) { return entry.first < w; });
  return (it != counts.end() && it->first == id) ? it->second : 0.0;
}

Document vectorize(const std::vector<Token>& tokens, const Vocabulary& vocab) {
  std::map<WordId, double> counts;
  for (const auto& token : tokens) {
    if (const auto id = vocab.find(token)) counts[*id] += 1.0;
  }
  Document doc;
  doc.counts.assign(counts.begin(), counts.end());
  for (const auto& [id, c] : doc.counts) doc.length += c;
  return doc;
}

Document normalize_length(const Document& doc, double m) {
  if (!(m > 0.0)) throw Error(ErrorCode::kDomain, "normalized length must be positive");
  if (doc.length <= 0.0) throw Error(ErrorCode::kZeroLengthDocument, "cannot normalize a zero-length document");
  Document out = doc;
  const double scale = m / doc.length;
  for (auto& [id, c] : out.counts) c *= scale;
  out.length = m;
  return out;
}

}  // namespace nbcf

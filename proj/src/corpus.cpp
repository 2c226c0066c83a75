#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "nbcf/corpus.hpp"
#include "nbcf/error.hpp"

namespace nbcf {

namespace fs = std::filesystem;

std::size_t Corpus::num_labeled() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(documents.begin(), documents.end(), [](const Document& d) { return d.label.has_value(); }));
}

void Corpus::validate() const {
  if (classes.empty()) throw Error(ErrorCode::kFormat, "corpus has no classes");
  if (class_sizes.size() != classes.size()) throw Error(ErrorCode::kFormat, "class_sizes/classes size mismatch");
  std::vector<std::size_t> seen(classes.size(), 0);
  for (const auto& doc : documents) {
    double length = 0.0;
    for (const auto& [id, c] : doc.counts) {
      if (id >= vocabulary.size()) throw Error(ErrorCode::kVocabMismatch, "word id out of range");
      if (!(c >= 0.0)) throw Error(ErrorCode::kFormat, "negative count");
      length += c;
    }
    if (std::abs(length - doc.length) > 1e-9 * std::max(1.0, doc.length)) {
      throw Error(ErrorCode::kFormat, "document length does not match its counts");
    }
    if (doc.label) {
      if (*doc.label >= classes.size()) throw Error(ErrorCode::kFormat, "label out of range");
      ++seen[*doc.label];
    }
  }
  if (seen != class_sizes) throw Error(ErrorCode::kFormat, "class_sizes disagree with labels");
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "dirtree") return CorpusFormat::kDirTree;
  throw Error(ErrorCode::kUsage, "unknown corpus format '" + std::string(name) + "' (expected jsonl|dirtree)");
}

std::vector<RawDocument> read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<RawDocument> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, where + ": malformed JSON: " + e.what());
    }
    if (!record.is_object()) throw Error(ErrorCode::kFormat, where + ": record is not an object");
    const auto label = record.find("label");
    const auto text = record.find("text");
    if (label == record.end() || !label->is_string()) {
      throw Error(ErrorCode::kFormat, where + ": missing string field \"label\"");
    }
    if (text == record.end() || !text->is_string()) {
      throw Error(ErrorCode::kFormat, where + ": missing string field \"text\"");
    }
    out.push_back({label->get<std::string>(), text->get<std::string>()});
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read error on " + path.string());
  return out;
}

std::vector<RawDocument> read_dirtree(const fs::path& root, std::vector<std::string>* class_dirs) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::kIo, "not a directory: " + root.string());
  std::vector<fs::path> classes;
  for (const auto& entry : fs::directory_iterator(root)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && !name.empty() && name.front() != '.') classes.push_back(entry.path());
  }
  std::sort(classes.begin(), classes.end());
  if (classes.empty()) throw Error(ErrorCode::kFormat, root.string() + ": no class directories");

  std::vector<RawDocument> out;
  for (const auto& dir : classes) {
    const auto label = dir.filename().string();
    if (class_dirs) class_dirs->push_back(label);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (entry.is_regular_file() && !name.empty() && name.front() != '.') files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string());
      std::ostringstream text;
      text << in.rdbuf();
      out.push_back({label, text.str()});
    }
  }
  return out;
}

Corpus build_corpus(const std::vector<RawDocument>& raw, int min_df, std::string name,
                    const std::vector<std::string>& extra_classes) {
  std::vector<std::vector<Token>> tokens(raw.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(raw.size()); ++d) {
    tokens[d] = tokenize(raw[d].text);
  }

  std::vector<std::string> classes(extra_classes);
  for (const auto& r : raw) classes.push_back(r.label);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.empty()) throw Error(ErrorCode::kEmptyCorpus, "corpus has no documents");
  std::map<std::string, ClassId> class_ids;
  for (std::size_t i = 0; i < classes.size(); ++i) class_ids.emplace(classes[i], static_cast<ClassId>(i));

  Corpus corpus{build_vocabulary(tokens, min_df), {}, classes, std::vector<std::size_t>(classes.size(), 0),
                std::move(name), min_df};
  corpus.documents.resize(raw.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(raw.size()); ++d) {
    corpus.documents[d] = vectorize(tokens[d], corpus.vocabulary);
    corpus.documents[d].label = class_ids.at(raw[d].label);
  }
  for (const auto& doc : corpus.documents) ++corpus.class_sizes[*doc.label];
  return corpus;
}

Corpus load_corpus(const fs::path& path, CorpusFormat format, int min_df) {
  const auto name = path.filename().empty() ? path.parent_path().filename().string() : path.filename().string();
  if (format == CorpusFormat::kJsonl) return build_corpus(read_jsonl(path), min_df, name);
  std::vector<std::string> class_dirs;
  const auto raw = read_dirtree(path, &class_dirs);
  return build_corpus(raw, min_df, name, class_dirs);
}

std::string synthetic_term(std::size_t id, std::size_t vocab_size) {
  const auto width = std::to_string(vocab_size > 0 ? vocab_size - 1 : 0).size();
  auto digits = std::to_string(id);
  return "w" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

std::string synthetic_class(std::size_t id, std::size_t num_classes) {
  const auto width = std::to_string(num_classes > 0 ? num_classes - 1 : 0).size();
  auto digits = std::to_string(id);
  return "c" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

void write_jsonl(const Corpus& corpus, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& doc : corpus.documents) {
    std::string text;
    for (const auto& [id, c] : doc.counts) {
      const auto& term = corpus.vocabulary.term(id);
      const auto n = static_cast<std::uint64_t>(std::llround(c));
      for (std::uint64_t r = 0; r < n; ++r) {
        if (!text.empty()) text.push_back(' ');
        text += term;
      }
    }
    nlohmann::json record;
    record["label"] = doc.label ? corpus.classes[*doc.label] : std::string();
    record["text"] = std::move(text);
    out << record.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace nbcf

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nbcf/error.hpp"
#include "nbcf/model.hpp"

namespace nbcf {

namespace {

// 17 significant digits round-trip every finite double.
std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

template <typename Range, typename Fn>
void write_array(std::ostringstream& out, const Range& items, Fn&& fn) {
  out << '[';
  bool first = true;
  for (const auto& item : items) {
    if (!first) out << ',';
    first = false;
    out << fn(item);
  }
  out << ']';
}

}  // namespace

std::string model_to_json(const Model& model) {
  std::ostringstream out;
  out << "{\"version\":" << kModelSchemaVersion;
  out << ",\"estimator\":" << quoted(std::string(to_string(model.config.estimator)));
  out << ",\"t\":" << number(model.config.t);
  out << ",\"alpha\":" << number(model.config.alpha);
  if (model.config.normalize_m) out << ",\"normalize_m\":" << number(*model.config.normalize_m);
  out << ",\n\"classes\":";
  write_array(out, model.class_names, quoted);
  out << ",\n\"vocab\":";
  write_array(out, model.vocab.terms(), quoted);
  out << ",\n\"log_priors\":";
  write_array(out, model.log_priors, number);
  out << ",\n\"theta\":[";
  for (std::size_t i = 0; i < model.theta.rows(); ++i) {
    if (i > 0) out << ",\n";
    write_array(out, model.theta.row(i), number);
  }
  out << "]}\n";
  return out.str();
}

Model model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version")) throw Error(ErrorCode::kFormat, "model file lacks a version tag");
  const auto& version = j["version"];
  if (!version.is_number_integer() || version.get<long long>() != kModelSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersion, "unsupported model schema version " + version.dump());
  }
  try {
    FitConfig config;
    config.estimator = parse_estimator(j.at("estimator").get<std::string>());
    config.t = j.at("t").get<double>();
    config.alpha = j.at("alpha").get<double>();
    if (j.contains("normalize_m") && !j["normalize_m"].is_null()) config.normalize_m = j["normalize_m"].get<double>();
    config.validate();

    auto classes = j.at("classes").get<std::vector<std::string>>();
    Vocabulary vocab(j.at("vocab").get<std::vector<std::string>>());
    auto log_priors = j.at("log_priors").get<std::vector<double>>();
    Matrix theta = matrix_from_rows(j.at("theta").get<std::vector<std::vector<double>>>());

    if (classes.empty() || theta.rows() != classes.size() || log_priors.size() != classes.size()) {
      throw Error(ErrorCode::kFormat, "model class count is inconsistent");
    }
    if (theta.cols() != vocab.size()) throw Error(ErrorCode::kFormat, "theta width does not match vocabulary");
    return Model{std::move(theta), std::move(log_priors), std::move(vocab), config, std::move(classes)};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << model_to_json(model);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return model_from_json(text.str());
}

}  // namespace nbcf

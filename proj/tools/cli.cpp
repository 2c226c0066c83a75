#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbcf/corpus.hpp"
#include "nbcf/error.hpp"
#include "nbcf/eval.hpp"
#include "nbcf/model.hpp"
#include "nbcf/validation.hpp"

namespace nbcf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  std::string corpus;
  std::string format = "jsonl";
  std::string estimator = "nb";
  double t = 0.0;
  double alpha = 1.0;
  int min_df = 2;
  std::optional<double> normalize_m;
  double train_fraction = 0.1;
  std::uint64_t seed = 0;
  std::string t_grid = "0:2:0.05";
  std::string eval_on = "test";
  std::string model;
  std::string input;
  std::string spec;
  std::size_t replications = 2000;
  std::string out;
};

json echo(const RunConfig& c, const CLI::App& sub) {
  json j;
  j["command"] = c.command;
  auto put = [&](const char* flag, json value) {
    if (sub.get_option_no_throw(std::string("--") + flag)) j[flag] = std::move(value);
  };
  put("corpus", c.corpus);
  put("format", c.format);
  put("estimator", c.estimator);
  put("t", c.t);
  put("alpha", c.alpha);
  put("min-df", c.min_df);
  put("normalize-m", c.normalize_m ? json(*c.normalize_m) : json(nullptr));
  put("train-fraction", c.train_fraction);
  put("seed", c.seed);
  put("t-grid", c.t_grid);
  put("eval-on", c.eval_on);
  put("model", c.model);
  put("input", c.input);
  put("spec", c.spec);
  put("replications", c.replications);
  put("out", c.out);
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void write_echo(const RunConfig& c, const CLI::App& sub) {
  write_text(fs::path(c.out + ".config.json"), echo(c, sub).dump(2) + "\n");
}

FitConfig fit_config(const RunConfig& c) {
  FitConfig fc;
  fc.estimator = parse_estimator(c.estimator);
  fc.t = fc.estimator == Estimator::kNb ? 0.0 : c.t;
  fc.alpha = c.alpha;
  fc.normalize_m = c.normalize_m;
  fc.validate();
  return fc;
}

Corpus load(const RunConfig& c) { return load_corpus(c.corpus, parse_corpus_format(c.format), c.min_df); }

void cmd_fit(const RunConfig& c) {
  const auto corpus = load(c);
  save_model(fit(corpus, fit_config(c)), c.out);
}

void cmd_predict(const RunConfig& c) {
  const Model model = load_model(c.model);
  std::ifstream in(c.input, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + c.input);
  std::ostringstream csv;
  csv << "doc_index,predicted_class";
  for (const auto& name : model.class_names) csv << ",score_" << name;
  csv << '\n';
  std::string line;
  std::size_t line_no = 0, doc_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kFormat, c.input + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    if (!record.is_object() || !record.contains("text") || !record["text"].is_string()) {
      throw Error(ErrorCode::kFormat, c.input + ":" + std::to_string(line_no) + ": missing string field \"text\"");
    }
    const Document doc = prepare_for_scoring(model, vectorize(tokenize(record["text"].get<std::string>()), model.vocab));
    const auto scores = log_score(model, doc);
    csv << doc_index++ << ',' << model.class_names[argmax_score(scores)];
    for (const double s : scores) csv << ',' << eval::format_double(s);
    csv << '\n';
  }
  write_text(c.out, csv.str());
}

void cmd_eval(const RunConfig& c) {
  const auto corpus = load(c);
  const auto report = eval::run_experiment(corpus, {c.train_fraction, c.seed}, fit_config(c), eval::parse_eval_on(c.eval_on));
  std::ostringstream csv;
  eval::write_report_csv(csv, report);
  write_text(c.out, csv.str());
}

void cmd_sweep(const RunConfig& c) {
  const auto grid = parse_grid(c.t_grid);
  FitConfig check{Estimator::kNbcf, 0.0, c.alpha, std::nullopt};
  check.validate();
  const auto corpus = load(c);
  const auto sweep = eval::sweep_t(corpus, {c.train_fraction, c.seed}, grid, c.alpha, eval::parse_eval_on(c.eval_on));
  std::ostringstream csv;
  eval::write_sweep_csv(csv, sweep);
  write_text(c.out, csv.str());
}

void cmd_simulate(const RunConfig& c) { write_jsonl(generate_synthetic(parse_synthetic_spec(c.spec)), c.out); }

bool cmd_validate(const RunConfig& c, std::ostream& err) {
  auto config = theory::parse_validation_config(c.spec);
  config.replications = c.replications;
  config.seed = c.seed;
  const auto report = theory::validate_theory(config);
  write_text(c.out, theory::to_json(report).dump(2) + "\n");
  std::ostringstream csv;
  theory::write_validation_csv(csv, report);
  write_text(fs::path(c.out).replace_extension(".csv"), csv.str());
  if (!report.all_pass()) {
    err << "ValidationFailed: at least one theory check failed; see " << c.out << '\n';
    return false;
  }
  return true;
}

std::string json_to_arg(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return eval::format_double(value.get<double>());
  return value.dump();
}

// Turns "--config FILE" into flags placed ahead of the user's own flags so
// that explicit flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  std::optional<std::size_t> at;
  for (std::size_t n = 0; n < args.size(); ++n) {
    if (args[n] == "--config" || args[n].rfind("--config=", 0) == 0) at = n;
  }
  if (!at || args.size() < 2) return args;

  std::string path;
  std::vector<std::string> rest(args.begin(), args.end());
  if (args[*at] == "--config") {
    if (*at + 1 >= args.size()) throw Error(ErrorCode::kUsage, "--config needs a file");
    path = args[*at + 1];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(*at), rest.begin() + static_cast<std::ptrdiff_t>(*at) + 2);
  } else {
    path = args[*at].substr(9);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(*at));
  }

  CLI::App* sub = nullptr;
  for (auto* candidate : app.get_subcommands({})) {
    if (candidate->get_name() == rest[1]) sub = candidate;
  }
  if (!sub) throw Error(ErrorCode::kUsage, "--config must follow a subcommand");

  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path);
  json config;
  try {
    config = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, path + ": " + e.what());
  }
  if (!config.is_object()) throw Error(ErrorCode::kUsage, path + ": config must be a flat JSON object");

  std::vector<std::string> injected;
  for (const auto& [key, value] : config.items()) {
    if (key == "command") continue;
    if (!sub->get_option_no_throw("--" + key) || key == "config") {
      throw Error(ErrorCode::kUsage, path + ": unknown config key '" + key + "' for " + sub->get_name());
    }
    if (value.is_null()) continue;
    if (value.is_object() || value.is_array()) throw Error(ErrorCode::kUsage, path + ": value of '" + key + "' must be scalar");
    injected.push_back("--" + key);
    injected.push_back(json_to_arg(value));
  }
  std::vector<std::string> out(rest.begin(), rest.begin() + 2);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + 2, rest.end());
  return out;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<double> parts;
  std::size_t pos = 0;
  for (int n = 0; n < 3; ++n) {
    const auto next = spec.find(':', pos);
    if ((n < 2) == (next == std::string_view::npos)) {
      throw Error(ErrorCode::kUsage, "grid must look like start:end:step, got '" + std::string(spec) + "'");
    }
    const auto piece = spec.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    double value = 0.0;
    const auto res = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (res.ec != std::errc() || res.ptr != piece.data() + piece.size() || !std::isfinite(value)) {
      throw Error(ErrorCode::kUsage, "bad number '" + std::string(piece) + "' in grid");
    }
    parts.push_back(value);
    pos = next + 1;
  }
  const double start = parts[0], end = parts[1], step = parts[2];
  if (!(step > 0.0)) throw Error(ErrorCode::kUsage, "grid step must be positive");
  if (start > end) throw Error(ErrorCode::kUsage, "grid start must not exceed end");
  const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double raw = start + static_cast<double>(n) * step;
    // Snap 0.30000000000000004 back to 0.3.
    const double snapped = std::round(raw * 1e9) / 1e9;
    grid.push_back(std::abs(snapped - raw) <= 1e-12 ? snapped : raw);
  }
  return grid;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multinomial Naive Bayes and correlation-factor Naive Bayes toolkit", "nbcf"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RunConfig c;
  std::string config_path;
  auto add_config = [&](CLI::App* s) { s->add_option("--config", config_path, "Flat JSON file of flag values"); };
  auto add_corpus = [&](CLI::App* s) {
    s->add_option("--corpus", c.corpus, "Corpus path")->required();
    s->add_option("--format", c.format, "Corpus format")->check(CLI::IsMember({"jsonl", "dirtree"}))->required();
    s->add_option("--min-df", c.min_df, "Minimum document frequency")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto add_alpha = [&](CLI::App* s) { s->add_option("--alpha", c.alpha, "Additive smoothing")->capture_default_str(); };
  auto add_split = [&](CLI::App* s) {
    s->add_option("--train-fraction", c.train_fraction, "Training fraction per class")->required();
    s->add_option("--seed", c.seed, "Split seed")->required();
    s->add_option("--eval-on", c.eval_on, "test|train")->check(CLI::IsMember({"test", "train"}))->capture_default_str();
  };
  auto add_estimator = [&](CLI::App* s) {
    s->add_option("--estimator", c.estimator, "nb|nbcf")->check(CLI::IsMember({"nb", "nbcf"}))->required();
    s->add_option("--t", c.t, "Correlation factor (nbcf)")->capture_default_str();
    s->add_option("--normalize-m", c.normalize_m, "Rescale documents to this length");
  };

  auto* fit_cmd = app.add_subcommand("fit", "Fit a model on a corpus");
  add_corpus(fit_cmd);
  add_estimator(fit_cmd);
  add_alpha(fit_cmd);
  fit_cmd->add_option("--out", c.out, "Model file")->required();
  add_config(fit_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "Score JSONL documents with a model");
  predict_cmd->add_option("--model", c.model, "Model file")->required();
  predict_cmd->add_option("--input", c.input, "JSONL with a \"text\" field")->required();
  predict_cmd->add_option("--out", c.out, "Output CSV")->required();
  add_config(predict_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "Stratified split, fit, per-class accuracy");
  add_corpus(eval_cmd);
  add_estimator(eval_cmd);
  add_alpha(eval_cmd);
  add_split(eval_cmd);
  eval_cmd->add_option("--out", c.out, "Report CSV")->required();
  add_config(eval_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy of NB-CF over a grid of t");
  add_corpus(sweep_cmd);
  add_alpha(sweep_cmd);
  add_split(sweep_cmd);
  sweep_cmd->add_option("--t-grid", c.t_grid, "start:end:step")->required();
  sweep_cmd->add_option("--out", c.out, "Sweep CSV")->required();
  add_config(sweep_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Write a synthetic multinomial corpus as JSONL");
  simulate_cmd->add_option("--spec", c.spec, "Synthetic spec JSON")->required();
  simulate_cmd->add_option("--out", c.out, "Output JSONL")->required();
  add_config(simulate_cmd);

  auto* validate_cmd = app.add_subcommand("validate-theory", "Monte Carlo check of the bias/variance formulas");
  validate_cmd->add_option("--spec", c.spec, "Synthetic spec JSON (optional \"t\")")->required();
  validate_cmd->add_option("--replications", c.replications, "Monte Carlo replications")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate_cmd->add_option("--seed", c.seed, "Monte Carlo seed")->required();
  validate_cmd->add_option("--out", c.out, "Report JSON (a .csv is written alongside)")->required();
  add_config(validate_cmd);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(args, app);
    std::vector<const char*> expanded;
    for (const auto& a : args) expanded.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(expanded.size()), expanded.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << to_string(ErrorCode::kUsage) << ": " << e.what() << '\n';
      return 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    bool ok = true;
    if (sub == fit_cmd) {
      cmd_fit(c);
    } else if (sub == predict_cmd) {
      cmd_predict(c);
    } else if (sub == eval_cmd) {
      cmd_eval(c);
    } else if (sub == sweep_cmd) {
      cmd_sweep(c);
    } else if (sub == simulate_cmd) {
      cmd_simulate(c);
    } else {
      ok = cmd_validate(c, err);
    }
    write_echo(c, *sub);
    return ok ? 0 : 1;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::kUsage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "InternalError: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nbcf::cli

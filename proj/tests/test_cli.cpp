#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "nbcf/error.hpp"
#include "nbcf/model.hpp"
#include "test_support.hpp"

using namespace nbcf;
using nbcf::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "nbcf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

std::string news() { return (testing::fixtures() / "news.jsonl").string(); }

void write_spec(const fs::path& p, const std::string& extra = "") {
  std::ofstream(p) << R"({"theta": [[0.2, 0.3, 0.5], [0.5, 0.3, 0.2]], "priors": [0.5, 0.5], "docs": 20,
                          "doc_length": 10, "seed": 4)"
                   << extra << "}";
}

}  // namespace

TEST_CASE("parse_grid") {
  CHECK(cli::parse_grid("0:2:0.5") == std::vector<double>{0, 0.5, 1, 1.5, 2});
  CHECK(cli::parse_grid("1:1:0.1") == std::vector<double>{1});
  const auto fine = cli::parse_grid("0:2:0.05");
  CHECK(fine.size() == 41);
  CHECK(fine.back() == 2.0);
  CHECK(cli::parse_grid("0:2:0.1")[3] == 0.3);
  for (const char* bad : {"2:0:0.1", "0:1:0", "0:1:-1", "0:1", "a:b:c", "0:1:0.1:2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(cli::parse_grid(bad), Error);
  }
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  const auto r = run({"fit", "--corpus", news(), "--format", "xml", "--estimator", "nb", "--out", "x"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("UsageError: ", 0) == 0);
  CHECK(run({"fit", "--corpus", news(), "--format", "jsonl"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("fit then predict") {
  TempDir dir;
  const auto model = (dir / "m.json").string();
  auto r = run({"fit", "--corpus", news(), "--format", "jsonl", "--estimator", "nbcf", "--t", "0.5", "--out", model});
  REQUIRE(r.code == 0);
  const Model m = load_model(model);
  CHECK(m.config.estimator == Estimator::kNbcf);
  CHECK(m.config.t == 0.5);
  CHECK(m.class_names == std::vector<std::string>{"sports", "tech"});
  CHECK(fs::exists(model + ".config.json"));

  const auto preds = (dir / "p.csv").string();
  r = run({"predict", "--model", model, "--input", news(), "--out", preds});
  REQUIRE(r.code == 0);
  const auto csv = slurp(preds);
  CHECK(csv.rfind("doc_index,predicted_class,score_sports,score_tech\n", 0) == 0);
  CHECK(count_lines(csv) == 11);
}

TEST_CASE("runtime errors exit 1 with the error code") {
  TempDir dir;
  auto r = run({"fit", "--corpus", (dir / "nope.jsonl").string(), "--format", "jsonl", "--estimator", "nb", "--out",
                (dir / "m.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("IoError: ", 0) == 0);

  r = run({"fit", "--corpus", (testing::fixtures() / "missing_label.jsonl").string(), "--format", "jsonl",
           "--estimator", "nb", "--out", (dir / "m.json").string()});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("FormatError: ", 0) == 0);

  std::ofstream(dir / "bad_model.json") << R"({"version": 999})";
  r = run({"predict", "--model", (dir / "bad_model.json").string(), "--input", news(), "--out",
           (dir / "p.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("SchemaVersionError: ", 0) == 0);

  r = run({"eval", "--corpus", news(), "--format", "jsonl", "--estimator", "nb", "--train-fraction", "0.99", "--seed",
           "1", "--out", (dir / "r.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("SplitInfeasible: ", 0) == 0);
}

TEST_CASE("eval writes a report and a config echo") {
  TempDir dir;
  const auto out = (dir / "r.csv").string();
  const std::vector<std::string> args{"eval", "--corpus", news(), "--format", "jsonl", "--estimator", "nbcf",
                                      "--t", "1", "--train-fraction", "0.5", "--seed", "3", "--out", out};
  REQUIRE(run(args).code == 0);
  const auto first = slurp(out);
  CHECK(first.rfind("corpus,estimator,t,alpha,train_fraction,seed,eval_on,class_name,class_size,accuracy\n", 0) == 0);
  CHECK(count_lines(first) == 5);
  REQUIRE(run(args).code == 0);
  CHECK(slurp(out) == first);

  const auto echo = nlohmann::json::parse(slurp(out + ".config.json"));
  CHECK(echo["command"] == "eval");
  CHECK(echo["t"] == 1.0);
  CHECK(echo["seed"] == 3);
}

TEST_CASE("config file supplies flags and the command line overrides it") {
  TempDir dir;
  const auto out = (dir / "r.csv").string();
  std::ofstream(dir / "cfg.json") << R"({"corpus": ")" << news()
                                  << R"(", "format": "jsonl", "estimator": "nbcf", "t": 0.25, "train-fraction": 0.5,
                                        "seed": 3})";
  auto r = run({"eval", "--config", (dir / "cfg.json").string(), "--out", out});
  REQUIRE(r.code == 0);
  CHECK(slurp(out).find(",nbcf,0.25,") != std::string::npos);

  r = run({"eval", "--config", (dir / "cfg.json").string(), "--t", "2", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(slurp(out).find(",nbcf,2,") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(out + ".config.json"))["t"] == 2.0);

  std::ofstream(dir / "bad.json") << R"({"colour": "red"})";
  r = run({"eval", "--config", (dir / "bad.json").string(), "--out", out});
  CHECK(r.code == 2);
}

TEST_CASE("sweep writes one block per grid point") {
  TempDir dir;
  const auto out = (dir / "s.csv").string();
  auto r = run({"sweep", "--corpus", news(), "--format", "jsonl", "--train-fraction", "0.5", "--seed", "1",
                "--t-grid", "0:2:0.05", "--out", out});
  REQUIRE(r.code == 0);
  const auto csv = slurp(out);
  CHECK(count_lines(csv) == 1 + 41 * 4);
  std::size_t sports = 0;
  for (std::size_t pos = 0; (pos = csv.find(",sports,", pos)) != std::string::npos; ++pos) ++sports;
  CHECK(sports == 41);

  CHECK(run({"sweep", "--corpus", news(), "--format", "jsonl", "--train-fraction", "0.5", "--seed", "1", "--t-grid",
             "2:0:0.1", "--out", out})
            .code == 2);
}

TEST_CASE("simulate and validate-theory") {
  TempDir dir;
  write_spec(dir / "spec.json");
  const auto corpus = (dir / "sim.jsonl").string();
  REQUIRE(run({"simulate", "--spec", (dir / "spec.json").string(), "--out", corpus}).code == 0);
  CHECK(count_lines(slurp(corpus)) == 20);
  const auto again = (dir / "sim2.jsonl").string();
  REQUIRE(run({"simulate", "--spec", (dir / "spec.json").string(), "--out", again}).code == 0);
  CHECK(slurp(again) == slurp(corpus));

  write_spec(dir / "vspec.json", R"(, "t": [0.5])");
  const auto report = (dir / "v.json").string();
  auto r = run({"validate-theory", "--spec", (dir / "vspec.json").string(), "--replications", "1000", "--seed", "2",
                "--out", report});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j["runs"].size() == 2);
  CHECK(j["pass"] == true);
  CHECK(fs::exists(dir / "v.csv"));

  write_spec(dir / "broken.json", R"(, "colour": 1)");
  r = run({"validate-theory", "--spec", (dir / "broken.json").string(), "--seed", "2", "--out", report});
  CHECK(r.code == 1);
}

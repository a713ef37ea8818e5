#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace prbox {
namespace {

using nlohmann::json;

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/prbox_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }

  std::string slurp() const {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  }
};

json run_json(const std::vector<std::string>& args, const std::string& tag,
              int expected_exit = 0) {
  TempFile tmp(tag + ".json");
  std::vector<std::string> full = args;
  full.push_back("--out");
  full.push_back(tmp.path);
  const int code = run_cli(full);
  CHECK(code == expected_exit);
  return json::parse(tmp.slurp());
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"run"}) == 2);  // --model is required
  CHECK(run_cli({"run", "--model", "quantum"}) == 2);
  CHECK(run_cli({"run", "--model", "ideal", "--trials", "0"}) == 2);
  CHECK(run_cli({"run", "--model", "ideal", "--p", "0.9", "--trials", "10"}) == 2);
  CHECK(run_cli({"run", "--model", "noisy", "--p", "1.5", "--trials", "10"}) == 2);
  CHECK(run_cli({"counterfactual", "--input", "2"}) == 2);
  CHECK(run_cli({"run", "--model", "ideal", "--format", "yaml"}) == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({"run", "--help"}) == 0);
}

TEST_CASE("run report carries the frozen schema") {
  const json doc = run_json({"run", "--model", "ideal", "--trials", "2000"}, "schema");
  CHECK(doc.at("meta").at("command") == "run");
  CHECK(doc.at("meta").at("model") == "ideal");
  CHECK(doc.at("meta").at("trials") == 2000);
  CHECK(doc.at("meta").at("seed") == 1729);
  CHECK(doc.at("meta").at("seed_source") == "default");
  CHECK(doc.at("meta").at("format_version") == 1);
  CHECK(doc.at("rates").at("overall") == 1.0);
  for (const char* cell : {"x0y0", "x0y1", "x1y0", "x1y1"}) {
    CHECK(doc.at("rates").at("by_pair").at(cell).at("rate") == 1.0);
  }
  for (const char* side : {"alice", "bob"}) {
    for (const char* input : {"input0", "input1"}) {
      CHECK(doc.at("marginals").at(side).at(input).contains("green_rate"));
      CHECK(doc.at("nosignal").at(side).at(input).contains("z"));
    }
  }
  CHECK(doc.at("nosignal").at("threshold") == 4.0);
  CHECK(doc.at("verdict") == "PASS");
}

TEST_CASE("seed is taken from the flag, the environment, or the default") {
  unsetenv("PRBOX_SEED");
  const json by_default = run_json({"run", "--model", "lhv", "--trials", "400"}, "seed_default");
  CHECK(by_default.at("meta").at("seed") == 1729);
  CHECK(by_default.at("meta").at("seed_source") == "default");

  setenv("PRBOX_SEED", "555", 1);
  const json by_env = run_json({"run", "--model", "lhv", "--trials", "400"}, "seed_env");
  CHECK(by_env.at("meta").at("seed") == 555);
  CHECK(by_env.at("meta").at("seed_source") == "env");

  const json by_flag =
      run_json({"run", "--model", "lhv", "--trials", "400", "--seed", "9"}, "seed_flag");
  CHECK(by_flag.at("meta").at("seed") == 9);
  CHECK(by_flag.at("meta").at("seed_source") == "flag");

  setenv("PRBOX_SEED", "not-a-number", 1);
  CHECK(run_cli({"run", "--model", "lhv", "--trials", "400"}) == 2);
  unsetenv("PRBOX_SEED");
}

TEST_CASE("csv reports have the fixed header and four data rows") {
  TempFile tmp("run.csv");
  CHECK(run_cli({"run", "--model", "noisy", "--p", "0.9", "--trials", "2000", "--format", "csv",
                 "--out", tmp.path}) == 0);
  std::istringstream lines(tmp.slurp());
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line ==
        "model,p,trials,seed,x,y,n,satisfied,satisfaction_rate,"
        "alice_green,alice_green_rate,bob_green,bob_green_rate,verdict");
  int rows = 0;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("bell-bound is exact by default and empirical on request") {
  const json exact = run_json({"bell-bound"}, "bell_exact");
  CHECK(exact.at("bounds").at("lhv") == "3/4");
  CHECK(exact.at("bounds").at("lhv_value") == 0.75);
  CHECK(exact.at("empirical").empty());
  CHECK(exact.at("witness").at("success") == "3/4");

  const json measured = run_json({"bell-bound", "--trials", "1500"}, "bell_measured");
  CHECK(measured.at("empirical").size() == 4);
  for (const auto& row : measured.at("empirical")) {
    CHECK(row.at("ok") == true);
  }
}

TEST_CASE("nosignal subcommand reports only the z block") {
  const json doc = run_json({"nosignal", "--model", "ideal", "--trials", "2000"}, "nosignal");
  CHECK(doc.at("meta").at("command") == "nosignal");
  CHECK(doc.contains("nosignal"));
  CHECK_FALSE(doc.contains("rates"));
  CHECK(doc.at("verdict") == "PASS");
}

TEST_CASE("epr subcommand certifies total agreement") {
  const json doc = run_json({"epr", "--trials", "300"}, "epr");
  CHECK(doc.at("epr").at("agreement_rate") == 1.0);
  CHECK(doc.at("epr").at("records_checked") == 600);
  CHECK(doc.at("verdict") == "PASS");
}

TEST_CASE("counterfactual subcommand lists both colours") {
  for (const char* input : {"0", "1"}) {
    const json doc = run_json({"counterfactual", "--input", input},
                              std::string("cf") + input);
    CHECK(doc.at("colours") == json::array({"green", "red"}));
    CHECK(doc.at("verdict") == "PASS");
  }
}

TEST_CASE("audit-locality reports every scenario") {
  const json doc = run_json({"audit-locality"}, "audit");
  CHECK(doc.at("scenarios").size() >= 6);
  for (const auto& scenario : doc.at("scenarios")) {
    CHECK(scenario.at("pass") == true);
  }
  CHECK(doc.at("verdict") == "PASS");
}

TEST_CASE("same invocation twice produces byte-identical files") {
  TempFile a("det_a.json"), b("det_b.json");
  const std::vector<std::string> args = {"run",    "--model", "pl",  "--trials", "500",
                                         "--seed", "31415"};
  auto with_out = [&](const std::string& path) {
    std::vector<std::string> full = args;
    full.push_back("--out");
    full.push_back(path);
    return full;
  };
  CHECK(run_cli(with_out(a.path)) == 0);
  CHECK(run_cli(with_out(b.path)) == 0);
  const std::string first = a.slurp();
  CHECK_FALSE(first.empty());
  CHECK(first == b.slurp());
}

TEST_CASE("unwritable output path is a usage error") {
  CHECK(run_cli({"bell-bound", "--out", "/nonexistent-dir/report.json"}) == 2);
}

}  // namespace
}  // namespace prbox

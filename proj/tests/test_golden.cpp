// Golden tests: every examples/*.cpcf with an .expect sidecar is run in both
// modes and checked against the recorded observables.
//
// Sidecar format (line comments with --):
//   <key>=<expected>      exact match / equality for numeric keys
//   <key><=<bound>        numeric upper bound
//   <key>>=<bound>        numeric lower bound
// Keys: {classic,eff,effR}.outcome (text as the CLI prints it),
//       {classic,eff,effR}.{peakMonitorNesting,peakStackLength},
//       rules=<file> (selects the rule file for the effR run).
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpcf/eval_classic.hpp"
#include "cpcf/eval_space.hpp"
#include "cpcf/surface.hpp"
#include "cpcf/types.hpp"
#include "test_util.hpp"

using namespace cpcf;
namespace fs = std::filesystem;

namespace {

struct Expectation {
  std::string key;
  std::string op;  // "=", "<=", ">="
  std::string value;
};

std::vector<Expectation> parseExpect(const fs::path& path) {
  std::vector<Expectation> out;
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("--", 0) == 0) continue;
    for (const char* op : {"<=", ">=", "="}) {
      size_t at = line.find(op);
      if (at != std::string::npos) {
        out.push_back({line.substr(0, at), op, line.substr(at + strlen(op))});
        break;
      }
    }
  }
  return out;
}

std::string outcomeText(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Value: return "value: " + printTerm(o.value);
    case Outcome::Kind::Blame: return "blame: " + o.label;
    default: return "out-of-fuel";
  }
}

long metric(const EvalStats& st, const std::string& name) {
  if (name == "peakMonitorNesting") return st.peakMonitorNesting;
  if (name == "peakStackLength") return st.peakStackLength;
  FAIL("unknown metric ", name);
  return -1;
}

void checkNumeric(const Expectation& e, long actual) {
  long bound = std::stol(e.value);
  INFO(e.key, " ", e.op, " ", e.value, " (actual ", actual, ")");
  if (e.op == "=") CHECK(actual == bound);
  if (e.op == "<=") CHECK(actual <= bound);
  if (e.op == ">=") CHECK(actual >= bound);
}

void runGolden(const fs::path& program, const fs::path& expectFile) {
  std::vector<Expectation> expects = parseExpect(expectFile);

  std::string rulesFile;
  bool needsDeep = false;
  for (const auto& e : expects) {
    if (e.key == "rules") rulesFile = e.value;
    if (e.key.find("peakStackLength") != std::string::npos) needsDeep = true;
  }

  TermPtr prog = parseTermFile(program.string());
  typeOfTerm(prog);

  EvalOptions opts;
  opts.fuel = 300000;
  opts.deepStats = needsDeep;

  ImplicationEngine eq;
  std::map<std::string, EvalResult> runs;
  runs["classic"] = evalClassic(prog, opts);
  runs["eff"] = evalEff(prog, eq, opts);
  std::optional<ImplicationEngine> ruleEngine;
  if (!rulesFile.empty()) {
    ruleEngine.emplace(
        parseRulesFile((program.parent_path() / rulesFile).string()));
    runs["effR"] = evalEff(prog, *ruleEngine, opts);
  }

  for (const auto& e : expects) {
    if (e.key == "rules") continue;
    size_t dot = e.key.find('.');
    REQUIRE(dot != std::string::npos);
    std::string mode = e.key.substr(0, dot);
    std::string what = e.key.substr(dot + 1);
    REQUIRE(runs.count(mode) == 1);
    const EvalResult& r = runs[mode];
    if (what == "outcome") {
      INFO(program.filename().string(), " ", e.key);
      CHECK(outcomeText(r.outcome) == e.value);
    } else {
      checkNumeric(e, metric(r.stats, what));
    }
  }
}

}  // namespace

TEST_CASE("golden: every corpus program matches its .expect sidecar") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(CPCF_EXAMPLES_DIR)) {
    if (entry.path().extension() != ".cpcf") continue;
    fs::path expect = entry.path();
    expect.replace_extension(".expect");
    REQUIRE_MESSAGE(fs::exists(expect), expect.string());
    INFO("program: ", entry.path().string());
    runGolden(entry.path(), expect);
    ++count;
  }
  CHECK(count >= 8);
}

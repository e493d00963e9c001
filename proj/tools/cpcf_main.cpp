// cpcf: command-line driver for the dual-semantics contract PCF toolkit.
//
//   run <file> --mode {classic|eff} [--rules f] [--fuel n] [--trace] ...
//   check <file>
//   compare <file> [--rules f] [--fuel n]
//   stats <file> --mode m [--out csv]
//   verify-rules <rules> --pool <program>
//   fuzz --n <k> [--seed s] [--dependent] [--rules f]
//
// Exit codes: 0 value / success, 2 blame, 3 out-of-fuel, 1 errors.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cpcf/eval_classic.hpp"
#include "cpcf/eval_space.hpp"
#include "cpcf/harness.hpp"
#include "cpcf/implication.hpp"
#include "cpcf/metering.hpp"
#include "cpcf/subst.hpp"
#include "cpcf/surface.hpp"
#include "cpcf/types.hpp"

namespace {

using namespace cpcf;

constexpr size_t kTraceLimit = 400;

ImplicationEngine loadEngine(const std::string& rulesPath, long fuel) {
  if (rulesPath.empty()) return ImplicationEngine{};
  return ImplicationEngine{parseRulesFile(rulesPath), fuel};
}

DropKey parseDropKey(const std::string& s) {
  return s == "probe" ? DropKey::Probe : DropKey::Removed;
}

std::string outcomeLine(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Value: return "value: " + printTerm(o.value);
    case Outcome::Kind::Blame: return "blame: " + o.label;
    default: return "out-of-fuel";
  }
}

int outcomeExit(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Value: return 0;
    case Outcome::Kind::Blame: return 2;
    default: return 3;
  }
}

void printTrace(const StepTrace& trace, bool full) {
  long k = 0;
  for (const StepEntry& entry : trace) {
    std::string term = printTerm(entry.term);
    if (!full && term.size() > kTraceLimit) {
      term = term.substr(0, kTraceLimit) + "...";
    }
    std::cout << "[step " << ++k << "] " << entry.rule << ": " << term << "\n";
  }
}

void printSummary(const Outcome& o, const EvalStats& st, bool deep) {
  const char* kind = o.kind == Outcome::Kind::Value     ? "value"
                     : o.kind == Outcome::Kind::Blame   ? "blame"
                                                        : "out-of-fuel";
  std::cout << "outcome=" << kind << "\n"
            << "steps=" << st.steps << "\n"
            << "peakMonitorNesting=" << st.peakMonitorNesting << "\n";
  if (deep) {
    std::cout << "peakMonitorCount=" << st.peakMonitorCount << "\n"
              << "peakStackLength=" << st.peakStackLength << "\n";
    for (const auto& [base, len] : st.peakStackPerBase) {
      std::cout << "peakStackLength."
                << (base == BaseType::Int ? "Int" : "Bool") << "=" << len
                << "\n";
    }
    std::cout << "livePredPeak=" << st.livePredPeak << "\n";
  }
}

bool writeSeriesCsv(const std::string& path, const EvalStats& st) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) {
      std::cerr << "error: cannot open " << path << " for writing\n";
      return false;
    }
    out = &file;
  }
  *out << "step,monitorNesting,totalStackEntries\n";
  for (const SeriesPoint& p : st.series) {
    *out << p.step << "," << p.monitorNesting << "," << p.totalStackEntries
         << "\n";
  }
  return true;
}

EvalResult runMode(const TermPtr& program, const std::string& mode,
                   const ImplicationEngine& engine, DropKey dropKey,
                   const EvalOptions& opts) {
  if (mode == "classic") return evalClassic(program, opts);
  return evalEff(program, engine, opts, dropKey);
}

void printAxiomResult(const char* name, const AxiomResult& r) {
  std::cout << name << "=" << (r.ok ? "pass" : "fail") << "\n";
  if (!r.ok && !r.counterexample.empty()) {
    std::cout << name << ".counterexample=" << r.counterexample << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-semantics contract PCF interpreter and analysis toolkit"};
  app.require_subcommand(1);

  std::string programPath, rulesPath, poolPath, statsOut, mode = "classic",
                                                          dropKeyName =
                                                              "removed";
  long fuel = 100000;
  bool trace = false, traceFull = false, deep = false, dependent = false;
  long fuzzN = 1000;
  std::uint64_t seed = 1;

  auto addEvalFlags = [&](CLI::App* cmd, bool withMode) {
    if (withMode) {
      cmd->add_option("--mode", mode, "classic or eff")
          ->check(CLI::IsMember({"classic", "eff"}));
    }
    cmd->add_option("--rules", rulesPath, "implication rule file (eff)");
    cmd->add_option("--fuel", fuel, "step budget");
    cmd->add_option("--drop-key", dropKeyName,
                    "recursion key in drop's implied case (eff)")
        ->check(CLI::IsMember({"removed", "probe"}));
  };

  CLI::App* cmdRun = app.add_subcommand("run", "evaluate a program");
  cmdRun->add_option("file", programPath)->required();
  addEvalFlags(cmdRun, true);
  cmdRun->add_flag("--trace", trace, "print each step");
  cmdRun->add_flag("--trace-full", traceFull, "print untruncated step terms");
  cmdRun->add_flag("--deep", deep, "per-step structural space census");
  cmdRun->add_option("--stats", statsOut, "write per-step CSV to this path");

  CLI::App* cmdCheck = app.add_subcommand("check", "typecheck a program");
  cmdCheck->add_option("file", programPath)->required();

  CLI::App* cmdCompare =
      app.add_subcommand("compare", "run both modes and compare outcomes");
  cmdCompare->add_option("file", programPath)->required();
  addEvalFlags(cmdCompare, false);

  CLI::App* cmdStats =
      app.add_subcommand("stats", "evaluate with a full per-step CSV");
  cmdStats->add_option("file", programPath)->required();
  addEvalFlags(cmdStats, true);
  cmdStats->add_option("--out", statsOut, "CSV output path (default stdout)");

  CLI::App* cmdVerify =
      app.add_subcommand("verify-rules", "check implication-rule axioms");
  cmdVerify->add_option("rules", rulesPath)->required();
  cmdVerify->add_option("--pool", poolPath, "program supplying the predicate pool")
      ->required();
  cmdVerify->add_option("--fuel", fuel, "rule condition step budget");

  CLI::App* cmdFuzz =
      app.add_subcommand("fuzz", "differential testing of the two modes");
  cmdFuzz->add_option("--n", fuzzN, "number of trials");
  cmdFuzz->add_option("--seed", seed, "generator seed");
  cmdFuzz->add_flag("--dependent", dependent, "generate dependent contracts");
  cmdFuzz->add_option("--rules", rulesPath, "implication rule file");
  cmdFuzz->add_option("--fuel", fuel, "step budget per trial");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmdRun || *cmdStats) {
      bool isStats = static_cast<bool>(*cmdStats);
      if (mode == "classic" && (!rulesPath.empty() || dropKeyName != "removed")) {
        std::cerr << "error: --rules/--drop-key apply to eff mode only\n";
        return 1;
      }
      TermPtr program = parseTermFile(programPath);
      typeOfTerm(program);
      ImplicationEngine engine = loadEngine(rulesPath, fuel);
      EvalOptions opts;
      opts.fuel = fuel;
      opts.trace = trace || traceFull;
      opts.deepStats = deep || isStats || !statsOut.empty();
      opts.collectSeries = isStats || !statsOut.empty();
      EvalResult res =
          runMode(program, mode, engine, parseDropKey(dropKeyName), opts);
      if (opts.trace) printTrace(res.trace, traceFull);
      std::cout << outcomeLine(res.outcome) << "\n";
      printSummary(res.outcome, res.stats, opts.deepStats);
      if (opts.collectSeries && !writeSeriesCsv(statsOut, res.stats)) return 1;
      return outcomeExit(res.outcome);
    }

    if (*cmdCheck) {
      TermPtr program = parseTermFile(programPath);
      std::cout << printType(typeOfTerm(program)) << "\n";
      return 0;
    }

    if (*cmdCompare) {
      TermPtr program = parseTermFile(programPath);
      typeOfTerm(program);
      ImplicationEngine engine = loadEngine(rulesPath, fuel);
      EvalOptions opts;
      opts.fuel = fuel;
      Outcome c = evalClassic(program, opts).outcome;
      Outcome e =
          evalEff(program, engine, opts, parseDropKey(dropKeyName)).outcome;
      std::cout << "classic: " << outcomeLine(c) << "\n"
                << "eff: " << outcomeLine(e) << "\n";
      bool inconclusive = c.kind == Outcome::Kind::OutOfFuel ||
                          e.kind == Outcome::Kind::OutOfFuel;
      if (inconclusive) {
        std::cout << "inconclusive\n";
        return 0;
      }
      if (outcomesAgree(c, e)) {
        std::cout << "agree: "
                  << (c.kind == Outcome::Kind::Value
                          ? "value " + printTerm(c.value)
                          : "blame " + c.label)
                  << "\n";
        return 0;
      }
      std::cout << "disagree\n";
      return 1;
    }

    if (*cmdVerify) {
      ImplicationEngine engine = loadEngine(rulesPath, fuel);
      TermPtr program = parseTermFile(poolPath);
      std::vector<Pred> pool = buildPredPool(program);
      AxiomReport report = verifyAxioms(engine, pool);
      std::cout << "pool=" << pool.size() << "\n";
      printAxiomResult("reflexivity", report.reflexivity);
      printAxiomResult("transitivity", report.transitivity);
      printAxiomResult("substitutivity", report.substitutivity);
      printAxiomResult("adequacy", report.adequacy);
      printAxiomResult("decidability", report.decidability);
      return report.allOk() ? 0 : 1;
    }

    if (*cmdFuzz) {
      GenConfig cfg = defaultGenConfig();
      cfg.seed = seed;
      cfg.dependentContracts = dependent;
      cfg.fuel = fuel;
      ImplicationEngine engine = loadEngine(rulesPath, fuel);
      DiffReport report = diffTest(cfg, fuzzN, engine);
      std::cout << "total=" << report.total << "\n"
                << "agreed=" << report.agreed << "\n"
                << "blameAgreed=" << report.blameAgreed << "\n"
                << "inconclusive=" << report.inconclusive << "\n"
                << "disagreements=" << report.disagreements.size() << "\n";
      for (const Disagreement& d : report.disagreements) {
        std::cout << "disagreement.program=" << d.program << "\n"
                  << "disagreement.classic=" << outcomeLine(d.classic) << "\n"
                  << "disagreement.eff=" << outcomeLine(d.efficient) << "\n";
      }
      return report.disagreements.empty() ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.line << ":" << e.column << ": "
              << e.what() << "\n";
    return 1;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return 1;
  } catch (const RuleEvalError& e) {
    std::cerr << "rule evaluation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

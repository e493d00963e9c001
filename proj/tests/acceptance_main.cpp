// Acceptance checks: one pass/fail line per criterion, exit 0 iff all pass.
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cpcf/eval_classic.hpp"
#include "cpcf/eval_space.hpp"
#include "cpcf/harness.hpp"
#include "cpcf/implication.hpp"
#include "cpcf/metering.hpp"
#include "cpcf/subst.hpp"
#include "cpcf/surface.hpp"
#include "cpcf/types.hpp"

using namespace cpcf;
namespace fs = std::filesystem;

namespace {

std::string ex(const std::string& name) {
  return std::string(CPCF_EXAMPLES_DIR) + "/" + name;
}

struct Criterion {
  std::ostringstream log;
  bool ok = true;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "    failed: " << what << "\n";
    }
  }
};

ImpliesFn impliesFn(const ImplicationEngine& engine) {
  return [&engine](const std::optional<std::string>& n1,
                   const ClosingSubstitution& s1, const TermPtr& b1,
                   const std::optional<std::string>& n2,
                   const ClosingSubstitution& s2, const TermPtr& b2) {
    return engine.implies(Pred{n1, s1, b1}, Pred{n2, s2, b2});
  };
}

bool isValue(const Outcome& o, const TermPtr& v) {
  return o.kind == Outcome::Kind::Value && alphaEq(o.value, v);
}

// --- criterion 1: odd5 golden traces ---------------------------------------
void criterion1(Criterion& c) {
  TermPtr prog = parseTermFile(ex("odd5.cpcf"));
  EvalOptions opts;
  opts.deepStats = true;

  EvalResult classic = evalClassic(prog, opts);
  c.require(isValue(classic.outcome, mkBool(false)), "classic value false");
  c.require(classic.stats.peakMonitorNesting == 3,
            "classic peak monitor nesting == 3");

  ImplicationEngine eq;
  EvalResult effEq = evalEff(prog, eq, opts);
  c.require(isValue(effEq.outcome, mkBool(false)), "eff(eq) value false");
  c.require(effEq.stats.peakMonitorNesting == 1, "eff(eq) peak monitors == 1");
  c.require(effEq.stats.peakStackLength == 3, "eff(eq) peak stack == 3");

  ImplicationEngine rules{parseRulesFile(ex("evenodd.impl"))};
  EvalResult effR = evalEff(prog, rules, opts);
  c.require(isValue(effR.outcome, mkBool(false)), "eff(rules) value false");
  c.require(effR.stats.peakStackLength <= 2, "eff(rules) peak stack <= 2");
}

// --- criterion 2: abusive proxies blame l2 in both modes --------------------
void criterion2(Criterion& c) {
  TermPtr prog = parseTermFile(ex("abusive.cpcf"));
  Outcome classic = evalClassicOutcome(prog, 100000);
  c.require(classic.kind == Outcome::Kind::Blame && classic.label == "l2",
            "classic blames l2");
  ImplicationEngine eq;
  Outcome eff = evalEffOutcome(prog, eq, 100000);
  c.require(eff.kind == Outcome::Kind::Blame && eff.label == "l2",
            "efficient blames l2");
}

// --- criterion 3: downTo scaling --------------------------------------------
void criterion3(Criterion& c) {
  ImplicationEngine rules{parseRulesFile(ex("down.impl"))};
  for (long n : {10, 100, 1000}) {
    TermPtr prog = parseTermFile(ex("downTo" + std::to_string(n) + ".cpcf"));
    EvalOptions opts;
    opts.fuel = 300000;
    EvalResult classic = evalClassic(prog, opts);
    c.require(isValue(classic.outcome, mkInt(0)),
              "classic downTo " + std::to_string(n) + " value 0");
    c.require(classic.stats.peakMonitorNesting >= n - 1,
              "classic nesting >= n-1 for n=" + std::to_string(n));

    opts.deepStats = true;
    EvalResult eff = evalEff(prog, rules, opts);
    c.require(isValue(eff.outcome, mkInt(0)),
              "eff downTo " + std::to_string(n) + " value 0");
    c.require(eff.stats.peakStackLength <= 2,
              "eff stack <= 2 for n=" + std::to_string(n));
  }
}

// --- criterion 4: differential equivalence ----------------------------------
void criterion4(Criterion& c) {
  ImplicationEngine eq;
  GenConfig cfg = defaultGenConfig();
  DiffReport simple = diffTest(cfg, 1000, eq);
  c.require(simple.disagreements.empty(), "simple suite: no disagreements");
  c.require(simple.inconclusive < 200, "simple suite: inconclusive < 20%");

  cfg.dependentContracts = true;
  cfg.seed = 7;
  DiffReport dep = diffTest(cfg, 1000, eq);
  c.require(dep.disagreements.empty(), "dependent suite: no disagreements");
  c.require(dep.inconclusive < 200, "dependent suite: inconclusive < 20%");
}

// --- criterion 5: join algebra ----------------------------------------------
void criterion5(Criterion& c) {
  ImplicationEngine eq;
  GenConfig cfg = defaultGenConfig();
  long assocFailures = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    LabeledPtr a = genLabeledBaseContract(cfg, 3 * t, BaseType::Int);
    LabeledPtr b = genLabeledBaseContract(cfg, 3 * t + 1, BaseType::Int);
    LabeledPtr d = genLabeledBaseContract(cfg, 3 * t + 2, BaseType::Int);
    if (t % 4 == 3) {  // lift every fourth triple to function contracts
      LabeledPtr a0 = a, b0 = b, d0 = d;
      a = mkLDepFun("x", b0, a0);
      b = mkLDepFun("x", d0, b0);
      d = mkLDepFun("x", a0, d0);
    }
    LabeledPtr lhs = joinContracts(a, joinContracts(b, d, eq), eq);
    LabeledPtr rhs = joinContracts(joinContracts(a, b, eq), d, eq);
    if (!alphaEqLabeled(lhs, rhs)) ++assocFailures;
  }
  c.require(assocFailures == 0, "join associativity on 10^4 triples");

  long idemFailures = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    LabeledPtr r = genLabeledBaseContract(cfg, t, BaseType::Int);
    TermPtr v = mkInt(static_cast<long>(t % 23) - 11);
    Outcome once = evalEffOutcome(mkMonE(r, v), eq, 10000);
    Outcome twice = evalEffOutcome(mkMonE(r, mkMonE(r, v)), eq, 10000);
    if (!outcomesAgree(once, twice)) ++idemFailures;
  }
  c.require(idemFailures == 0, "stack idempotence outcomes on 10^3 instances");
}

// --- criterion 6: monitor congruence ----------------------------------------
void criterion6(Criterion& c) {
  ImplicationEngine eq;
  GenConfig cfg = defaultGenConfig();
  CongruenceReport r = congruenceTest(10000, cfg, eq);
  c.require(r.failures.empty(),
            "congruence failures: " + std::to_string(r.failures.size()));
  c.require(r.total == 10000, "ran 10^4 samples");
}

// --- criterion 7: preds monotonicity ----------------------------------------
void criterion7(Criterion& c) {
  ImplicationEngine eq;
  ImpliesFn implies = impliesFn(eq);
  for (const auto& entry : fs::directory_iterator(CPCF_EXAMPLES_DIR)) {
    if (entry.path().extension() != ".cpcf") continue;
    TermPtr prog = parseTermFile(entry.path().string());
    if (!isSimple(prog, implies)) continue;
    for (EvalMode mode : {EvalMode::Classic, EvalMode::Eff}) {
      MonotoneReport r = checkPredsMonotone(prog, mode, eq, 300000);
      c.require(r.ok, "corpus " + entry.path().filename().string());
    }
  }
  GenConfig cfg = defaultGenConfig();
  for (std::uint64_t t = 0; t < 500; ++t) {
    TermPtr prog = genProgram(cfg, t);
    MonotoneReport r = checkPredsMonotone(prog, EvalMode::Eff, eq, 100000);
    if (!r.ok) {
      c.require(false, "generated trial " + std::to_string(t) + " at step " +
                           std::to_string(r.violationStep));
    }
  }
}

// --- criterion 8: space bound -----------------------------------------------
void criterion8(Criterion& c) {
  ImplicationEngine eq;
  GenConfig cfg = defaultGenConfig();
  for (std::uint64_t t = 0; t < 300; ++t) {
    TermPtr prog = genProgram(cfg, t);
    auto pb = predCountsPerBase(prog);
    EvalOptions opts;
    opts.deepStats = true;
    EvalResult r = evalEff(prog, eq, opts);
    for (const auto& [base, len] : r.stats.peakStackPerBase) {
      if (len > pb[base]) {
        c.require(false, "trial " + std::to_string(t) +
                             ": stack exceeded P_B (" + std::to_string(len) +
                             " > " + std::to_string(pb[base]) + ")");
      }
    }
  }
  SizeParams params;  // L = 8
  c.require(stackBits(4, params) == 64, "S_Int(P=4, L=8) == 64");
  c.require(stackBits(1, params) == 8, "S_Int(P=1, L=8) == 8");
  std::map<BaseType, long> counts{{BaseType::Int, 4}};
  ContractPtr pred = std::get<Term::MonC>(
      parseTermString("mon^L(pred(fun x:Int => x > 0), 5)")->node).contract;
  c.require(sizeOfContract(pred, counts, params) == 64,
            "sizeOfContract on a hand-computed instance");
}

// --- criterion 9: implication axioms ----------------------------------------
void criterion9(Criterion& c) {
  std::vector<Pred> downPool =
      buildPredPool(parseTermFile(ex("downTo10.cpcf")));
  std::vector<Pred> evenOddPool =
      buildPredPool(parseTermFile(ex("evenodd-dep.cpcf")));

  ImplicationEngine eq;
  c.require(verifyAxioms(eq, downPool).allOk(), "equality engine axioms");

  ImplicationEngine down{parseRulesFile(ex("down.impl"))};
  c.require(verifyAxioms(down, downPool).allOk(), "down.impl axioms");

  ImplicationEngine evenodd{parseRulesFile(ex("evenodd.impl"))};
  c.require(verifyAxioms(evenodd, evenOddPool).allOk(), "evenodd.impl axioms");

  ImplicationEngine bogus{parseRulesFile(ex("bogus.impl"))};
  AxiomReport report = verifyAxioms(bogus, downPool);
  c.require(!report.adequacy.ok, "bogus.impl fails adequacy");
  c.require(report.adequacyWitness.has_value() &&
                report.adequacyLeft.has_value() &&
                report.adequacyRight.has_value(),
            "bogus.impl adequacy counterexample carries a witness");
  if (report.adequacyWitness) {
    auto holds = [](const Pred& p, const TermPtr& k) {
      Outcome o =
          evalClassicOutcome(mkApp(applyClosing(p.sigma, p.body), k), 10000);
      return o.kind == Outcome::Kind::Value && alphaEq(o.value, mkBool(true));
    };
    c.require(holds(*report.adequacyLeft, *report.adequacyWitness) &&
                  !holds(*report.adequacyRight, *report.adequacyWitness),
              "the witness re-evaluates (passes left, fails right)");
  }
}

// --- criterion 10: type-soundness smoke --------------------------------------
void criterion10(Criterion& c) {
  ImplicationEngine eq;
  auto soundRun = [&](const TermPtr& prog, bool classic, long maxSteps,
                      std::string* why) {
    TypePtr ty0;
    try {
      ty0 = typeOfTerm(prog);
    } catch (const TypeError& e) {
      *why = std::string("initial type error: ") + e.what();
      return false;
    }
    FreshNameScope scope;
    TermPtr cur = prog;
    for (long i = 0; i < maxSteps; ++i) {
      StepResult s;
      try {
        s = classic ? stepClassic(cur) : stepEff(cur, eq);
      } catch (const StuckTerm& e) {
        *why = std::string("stuck: ") + e.what();
        return false;
      }
      if (s.kind != StepResult::Kind::Stepped) return true;
      cur = s.term;
      try {
        TypePtr ty = typeOfTerm(cur);
        if (!typesCompatible(ty0, ty)) {
          *why = "type changed at step " + std::to_string(i);
          return false;
        }
      } catch (const TypeError& e) {
        *why = "untypeable at step " + std::to_string(i) + ": " + e.what();
        return false;
      }
    }
    return true;  // out of step budget: everything checked so far held
  };

  for (const auto& entry : fs::directory_iterator(CPCF_EXAMPLES_DIR)) {
    if (entry.path().extension() != ".cpcf") continue;
    TermPtr prog = parseTermFile(entry.path().string());
    for (bool classic : {true, false}) {
      std::string why;
      if (!soundRun(prog, classic, 3000, &why)) {
        c.require(false, entry.path().filename().string() + " (" +
                             (classic ? "classic" : "eff") + "): " + why);
      }
    }
  }

  GenConfig cfg = defaultGenConfig();
  cfg.dependentContracts = true;
  cfg.seed = 3;
  for (std::uint64_t t = 0; t < 500; ++t) {
    TermPtr prog = genProgram(cfg, t);
    for (bool classic : {true, false}) {
      std::string why;
      if (!soundRun(prog, classic, 2000, &why)) {
        c.require(false, "generated trial " + std::to_string(t) + " (" +
                             (classic ? "classic" : "eff") + "): " + why);
      }
    }
  }
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<void(Criterion&)> fn;
  };
  std::vector<Entry> criteria{
      {"golden traces (odd 5)", criterion1},
      {"abusive proxies blame l2", criterion2},
      {"downTo scaling", criterion3},
      {"differential equivalence", criterion4},
      {"join algebra", criterion5},
      {"monitor congruence", criterion6},
      {"preds monotonicity", criterion7},
      {"space bound", criterion8},
      {"implication axioms", criterion9},
      {"type-soundness smoke", criterion10},
  };

  bool allOk = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      criteria[i].fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.log << "    exception: " << e.what() << "\n";
    }
    allOk = allOk && c.ok;
    std::cout << "criterion " << (i + 1) << " (" << criteria[i].name
              << "): " << (c.ok ? "PASS" : "FAIL") << "\n"
              << c.log.str();
  }
  std::cout << (allOk ? "all criteria passed" : "FAILURES present") << "\n";
  return allOk ? 0 : 1;
}

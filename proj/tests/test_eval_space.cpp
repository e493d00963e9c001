#include <doctest.h>

#include "cpcf/eval_classic.hpp"
#include "cpcf/eval_space.hpp"
#include "cpcf/surface.hpp"
#include "cpcf/types.hpp"
#include "test_util.hpp"

using namespace cpcf;
using cpcftest::examplePath;
using cpcftest::tm;

namespace {

ContractPtr contractOf(const std::string& monSrc) {
  TermPtr t = cpcftest::tm(monSrc);
  return std::get<Term::MonC>(t->node).contract;
}

LabeledPtr singleStack(const char* label, const std::string& bodySrc,
                       BaseType base = BaseType::Int) {
  return mkStack(base, {LabeledPred{label, std::nullopt, {},
                                    cpcftest::tm(bodySrc)}});
}

}  // namespace

TEST_CASE("labelContract: predicates become singleton stacks") {
  LabeledPtr c = labelContract("L", contractOf(
      "mon^z(pred(fun x:Int => x > 0), 5)"));
  const auto* ps = std::get_if<PredicateStack>(&c->node);
  REQUIRE(ps != nullptr);
  CHECK(ps->base == BaseType::Int);
  REQUIRE(ps->preds.size() == 1);
  CHECK(ps->preds[0].label == "L");
}

TEST_CASE("labelContract: function contracts label both sides") {
  ContractPtr c = contractOf(
      "mon^z(x:pred(fun x:Int => x >= 0) -> pred(fun y:Int => x >= y), "
      "fun x:Int => x)");
  LabeledPtr lc = labelContract("L", c);
  const auto* fn = std::get_if<LabeledContract::DepFun>(&lc->node);
  REQUIRE(fn != nullptr);
  CHECK(fn->param == "x");
  CHECK(std::get<PredicateStack>(fn->dom->node).preds[0].label == "L");
  CHECK(std::get<PredicateStack>(fn->cod->node).preds[0].label == "L");
}

TEST_CASE("labeling preserves the contract's type") {
  TypeEnv env;
  for (const char* src :
       {"mon^z(pred(fun x:Int => x > 0), 5)",
        "mon^z(x:pred(fun x:Int => x >= 0) -> pred(fun y:Int => x >= y), "
        "fun x:Int => x)"}) {
    ContractPtr c = contractOf(src);
    CHECK(typeEq(typeOfContract(c), typeOfLabeled(env, labelContract("L", c))));
  }
}

TEST_CASE("joinContracts: nil is a left identity") {
  ImplicationEngine eq;
  LabeledPtr nil = mkStack(BaseType::Int, {});
  LabeledPtr r2 = singleStack("L2", "fun x:Int => x > 0");
  CHECK(alphaEqLabeled(joinContracts(nil, r2, eq), r2));
}

TEST_CASE("joinContracts: the newer (inner) predicate wins") {
  ImplicationEngine eq;
  LabeledPtr inner = singleStack("L", "fun x:Int => x > 0");
  LabeledPtr outer = singleStack("L2", "fun x:Int => x > 0");
  LabeledPtr joined = joinContracts(inner, outer, eq);
  const auto& ps = std::get<PredicateStack>(joined->node);
  REQUIRE(ps.preds.size() == 1);  // duplicate dropped by reflexivity
  CHECK(ps.preds[0].label == "L");
}

TEST_CASE("dropStack") {
  ImplicationEngine eq;
  TermPtr p = tm("fun x:Int => x > 0");
  TermPtr q = tm("fun x:Int => x < 10");
  PredicateStack nil{BaseType::Int, {}};
  CHECK(dropStack(nil, Pred{std::nullopt, {}, p}, eq).preds.empty());

  PredicateStack withP{BaseType::Int,
                       {LabeledPred{"L", std::nullopt, {}, p}}};
  CHECK(dropStack(withP, Pred{std::nullopt, {}, p}, eq).preds.empty());

  PredicateStack withQ{BaseType::Int,
                       {LabeledPred{"L", std::nullopt, {}, q}}};
  CHECK(dropStack(withQ, Pred{std::nullopt, {}, p}, eq).preds.size() == 1);
}

TEST_CASE("wrapContract: the three predicate cases") {
  ImplicationEngine eq;
  LabeledPtr cDom = singleStack("D", "fun z:Int => z > 0");

  // x not free: unchanged.
  LabeledPtr closed = singleStack("L", "fun z:Int => z > 0");
  CHECK(alphaEqLabeled(wrapContract(closed, "x", cDom, eq), closed));

  // x free and unbound: sigma gains x -> mon(cDom, x).
  LabeledPtr open = singleStack("L", "fun y:Int => x >= y");
  LabeledPtr wrapped = wrapContract(open, "x", cDom, eq);
  const auto& ps = std::get<PredicateStack>(wrapped->node);
  REQUIRE(ps.preds[0].sigma.size() == 1);
  const auto* mon = std::get_if<Term::MonE>(&ps.preds[0].sigma[0].second->node);
  REQUIRE(mon != nullptr);
  CHECK(alphaEqLabeled(mon->labeled, cDom));
  CHECK(alphaEq(mon->subject, mkVar("x")));

  // sigma(x) already monitored: contracts join.
  LabeledPtr cPrev = singleStack("P", "fun z:Int => z < 100");
  ClosingSubstitution sigma{{"x", mkMonE(cPrev, mkVar("x"))}};
  LabeledPtr openSigma = mkStack(
      BaseType::Int,
      {LabeledPred{"L", std::nullopt, sigma, tm("fun y:Int => x >= y")}});
  LabeledPtr wrapped2 = wrapContract(openSigma, "x", cDom, eq);
  const auto& ps2 = std::get<PredicateStack>(wrapped2->node);
  const auto* mon2 =
      std::get_if<Term::MonE>(&ps2.preds[0].sigma[0].second->node);
  REQUIRE(mon2 != nullptr);
  CHECK(alphaEqLabeled(mon2->labeled, joinContracts(cPrev, cDom, eq)));
}

TEST_CASE("eff values include single proxies only") {
  ImplicationEngine eq;
  CHECK(isEffValue(mkInt(3)));
  CHECK(isEffValue(tm("fun x:Int => x")));
  LabeledPtr fn = mkLDepFun("x", mkStack(BaseType::Int, {}),
                            mkStack(BaseType::Int, {}));
  TermPtr proxy = mkMonE(fn, tm("fun x:Int => x"));
  CHECK(isEffValue(proxy));
  CHECK_FALSE(isEffValue(mkMonE(fn, proxy)));  // stacked proxies must join
  CHECK_FALSE(isEffValue(tm("mon^L(pred(fun x:Int => x > 0), 5)")));
}

TEST_CASE("E-MonCNil: empty stacks discharge") {
  ImplicationEngine eq;
  Outcome o = evalEffOutcome(mkMonE(mkStack(BaseType::Int, {}), mkInt(5)), eq);
  REQUIRE(o.kind == Outcome::Kind::Value);
  CHECK(alphaEq(o.value, mkInt(5)));
}

TEST_CASE("E-MonCJoin: colliding monitors join before anything else") {
  ImplicationEngine eq;
  LabeledPtr inner = singleStack("L", "fun x:Int => x > 0");
  LabeledPtr outer = singleStack("L2", "fun x:Int => x < 10");
  TermPtr t = mkMonE(outer, mkMonE(inner, mkInt(5)));
  StepResult s = stepEff(t, eq);
  REQUIRE(s.kind == StepResult::Kind::Stepped);
  CHECK(std::string(s.rule) == "E-MonCJoin");
  const auto& joined = std::get<Term::MonE>(s.term->node);
  const auto& ps = std::get<PredicateStack>(joined.labeled->node);
  CHECK(ps.preds.size() == 2);
  CHECK(ps.preds[0].label == "L");  // inner head first
}

TEST_CASE("odd 5 efficient, equality engine: one monitor, stack of three") {
  ImplicationEngine eq;
  EvalOptions opts;
  opts.deepStats = true;
  EvalResult r = evalEff(parseTermFile(examplePath("odd5.cpcf")), eq, opts);
  REQUIRE(r.outcome.kind == Outcome::Kind::Value);
  CHECK(alphaEq(r.outcome.value, mkBool(false)));
  CHECK(r.stats.peakMonitorNesting == 1);
  CHECK(r.stats.peakStackLength == 3);
}

TEST_CASE("odd 5 efficient with the even/odd rules: constant stack") {
  ImplicationEngine engine{parseRulesFile(examplePath("evenodd.impl"))};
  EvalOptions opts;
  opts.deepStats = true;
  EvalResult r = evalEff(parseTermFile(examplePath("odd5.cpcf")), engine,
                         opts);
  REQUIRE(r.outcome.kind == Outcome::Kind::Value);
  CHECK(alphaEq(r.outcome.value, mkBool(false)));
  CHECK(r.stats.peakStackLength <= 2);
}

TEST_CASE("downTo 100 with the down rule: constant stack") {
  ImplicationEngine engine{parseRulesFile(examplePath("down.impl"))};
  EvalOptions opts;
  opts.deepStats = true;
  EvalResult r = evalEff(parseTermFile(examplePath("downTo100.cpcf")), engine,
                         opts);
  REQUIRE(r.outcome.kind == Outcome::Kind::Value);
  CHECK(alphaEq(r.outcome.value, mkInt(0)));
  CHECK(r.stats.peakStackLength <= 2);
}

TEST_CASE("abusive proxies blame l2 in efficient mode too") {
  ImplicationEngine eq;
  Outcome o =
      evalEffOutcome(parseTermFile(examplePath("abusive.cpcf")), eq, 10000);
  REQUIRE(o.kind == Outcome::Kind::Blame);
  CHECK(o.label == "l2");
}

TEST_CASE("DropKey::Probe agrees on observable outcomes") {
  ImplicationEngine engine{parseRulesFile(examplePath("down.impl"))};
  TermPtr prog = parseTermFile(examplePath("downTo10.cpcf"));
  Outcome removed = evalEff(prog, engine, {}, DropKey::Removed).outcome;
  Outcome probe = evalEff(prog, engine, {}, DropKey::Probe).outcome;
  REQUIRE(removed.kind == Outcome::Kind::Value);
  REQUIRE(probe.kind == Outcome::Kind::Value);
  CHECK(alphaEq(removed.value, probe.value));
}

TEST_CASE("efficient and classic agree across the corpus") {
  ImplicationEngine eq;
  for (const char* name : {"odd5.cpcf", "evenodd-dep.cpcf", "fact.cpcf",
                           "increasing.cpcf", "simple.cpcf", "downTo10.cpcf",
                           "abusive.cpcf"}) {
    TermPtr prog = parseTermFile(examplePath(name));
    Outcome c = evalClassicOutcome(prog, 100000);
    Outcome e = evalEffOutcome(prog, eq, 100000);
    REQUIRE(c.kind == e.kind);
    if (c.kind == Outcome::Kind::Value) CHECK(alphaEq(c.value, e.value));
    if (c.kind == Outcome::Kind::Blame) CHECK(c.label == e.label);
  }
}

#include <doctest.h>

#include "cpcf/implication.hpp"
#include "cpcf/metering.hpp"
#include "cpcf/surface.hpp"
#include "test_util.hpp"

using namespace cpcf;
using cpcftest::examplePath;
using cpcftest::tm;

TEST_CASE("preds: constants have none; monitors contribute theirs") {
  CHECK(predsTerm(mkInt(5)).empty());

  PredKeySet s = predsTerm(tm("mon^L(pred(fun x:Int => x > 0), 2 + 3)"));
  REQUIRE(s.size() == 1);
  CHECK(alphaEq(s.begin()->body, tm("fun x:Int => x > 0")));
  CHECK(s.begin()->sigma.empty());
}

TEST_CASE("preds: labeled stacks keep their sigma") {
  LabeledPtr stack = mkStack(
      BaseType::Int,
      {LabeledPred{"L", std::nullopt, {{"x", mkInt(3)}},
                   tm("fun y:Int => x >= y")}});
  PredKeySet s = predsLabeled(stack);
  REQUIRE(s.size() == 1);
  REQUIRE(s.begin()->sigma.size() == 1);
  CHECK(alphaEq(s.begin()->sigma[0].second, mkInt(3)));
}

TEST_CASE("preds: identity is alpha-equality with sigma equality") {
  TermPtr t = tm(
      "mon^L(pred(fun x:Int => x > 0), mon^M(pred(fun z:Int => z > 0), 5))");
  CHECK(predsTerm(t).size() == 1);  // alpha-equal copies collapse
}

TEST_CASE("predCountsPerBase") {
  TermPtr t = tm(
      "if mon^A(pred(fun b:Bool => b), true) "
      "then mon^B(pred(fun x:Int => x > 0), 1) "
      "else mon^C(pred(fun x:Int => x < 10), 2)");
  auto counts = predCountsPerBase(t);
  CHECK(counts[BaseType::Int] == 2);
  CHECK(counts[BaseType::Bool] == 1);
}

TEST_CASE("stackBits: S_B = L * P_B * ceil(log2 max(P_B, 2))") {
  SizeParams p;  // L = 8
  CHECK(stackBits(4, p) == 64);   // 8 * 4 * 2
  CHECK(stackBits(1, p) == 8);    // log floor guarded to 1 bit
  CHECK(stackBits(0, p) == 0);
  CHECK(stackBits(5, p) == 120);  // 8 * 5 * 3 (ceil log2 5 = 3)
}

TEST_CASE("sizeOfContract: function contracts sum their parts") {
  SizeParams params;
  std::map<BaseType, long> counts{{BaseType::Int, 4}};
  ContractPtr pred = std::get<Term::MonC>(
      tm("mon^L(pred(fun x:Int => x > 0), 5)")->node).contract;
  CHECK(sizeOfContract(pred, counts, params) == 64);

  ContractPtr fn = std::get<Term::MonC>(
      tm("mon^L(x:pred(fun x:Int => x >= 0) -> pred(fun y:Int => x >= y), "
         "fun x:Int => x)")->node).contract;
  CHECK(sizeOfContract(fn, counts, params) == 128);
}

TEST_CASE("scanTerm census") {
  LabeledPred lp{"L", std::nullopt, {}, tm("fun x:Int => x > 0")};
  TermPtr t = mkMonE(mkStack(BaseType::Int, {lp, lp, lp}),
                     tm("mon^M(pred(fun b:Bool => b), true)"));
  StructuralCensus c = scanTerm(t);
  CHECK(c.monitorCount == 2);
  CHECK(c.maxStackLength == 3);
  CHECK(c.maxStackPerBase[BaseType::Int] == 3);
  CHECK(c.totalStackEntries == 3);
}

TEST_CASE("checkPredsMonotone holds on simple programs") {
  ImplicationEngine eq;
  MonotoneReport r = checkPredsMonotone(
      tm("mon^L(pred(fun x:Int => x > 0), 5)"), EvalMode::Classic, eq, 1000);
  CHECK(r.ok);
  CHECK(r.finalKind == Outcome::Kind::Value);

  for (EvalMode mode : {EvalMode::Classic, EvalMode::Eff}) {
    MonotoneReport rc = checkPredsMonotone(
        parseTermFile(examplePath("simple.cpcf")), mode, eq, 100000);
    CHECK(rc.ok);
    CHECK(rc.finalKind == Outcome::Kind::Value);
  }
}

TEST_CASE("checkPredsMonotone holds on blaming simple programs") {
  ImplicationEngine eq;
  MonotoneReport r = checkPredsMonotone(
      tm("mon^L(pred(fun x:Int => x > 0), 0)"), EvalMode::Eff, eq, 1000);
  CHECK(r.ok);
  CHECK(r.finalKind == Outcome::Kind::Blame);
}

TEST_CASE("checkPredsMonotone requires a simple program") {
  ImplicationEngine eq;
  CHECK_THROWS_AS(checkPredsMonotone(
                      parseTermFile(examplePath("downTo10.cpcf")),
                      EvalMode::Eff, eq, 1000),
                  PreconditionError);
}

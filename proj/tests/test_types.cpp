#include <doctest.h>

#include "cpcf/surface.hpp"
#include "cpcf/types.hpp"
#include "test_util.hpp"

using namespace cpcf;
using cpcftest::examplePath;
using cpcftest::tm;

TEST_CASE("typeOfTerm: basics") {
  CHECK(typeEq(typeOfTerm(tm("fun x:Int => x + 1")), tArrow(tInt(), tInt())));
  CHECK(typeEq(typeOfTerm(tm("if true then 1 else 2")), tInt()));
  CHECK(typeEq(typeOfTerm(tm("(fun x:Int => x > 0) 5")), tBool()));
}

TEST_CASE("typeOfTerm: monitor subject must match the contract type") {
  CHECK_THROWS_AS(typeOfTerm(tm("mon^L(pred(fun x:Int => x > 0), true)")),
                  TypeError);
}

TEST_CASE("typeOfTerm: corpus programs") {
  CHECK(typeEq(typeOfTerm(parseTermFile(examplePath("odd5.cpcf"))), tBool()));
  CHECK(typeEq(typeOfTerm(parseTermFile(examplePath("downTo10.cpcf"))),
               tInt()));
  CHECK(typeEq(typeOfTerm(parseTermFile(examplePath("abusive.cpcf"))),
               tInt()));
}

TEST_CASE("typeOfContract: predicates and dependent functions") {
  TermPtr probe = tm("mon^L(pred(fun x:Int => x > 0), 5)");
  const auto& mon = std::get<Term::MonC>(probe->node);
  CHECK(typeEq(typeOfContract(mon.contract), tInt()));

  TermPtr probe2 = tm(
      "mon^L(x:pred(fun z:Int => z > 0) -> pred(fun y:Int => y > x), "
      "fun x:Int => x + 1)");
  const auto& mon2 = std::get<Term::MonC>(probe2->node);
  CHECK(typeEq(typeOfContract(mon2.contract), tArrow(tInt(), tInt())));
}

TEST_CASE("typeOfContract: ill-typed closing substitution") {
  ClosingSubstitution sigma{{"y", mkBool(true)}};
  ContractPtr c = mkPred(std::nullopt, sigma, tm("fun x:Int => x > y"));
  CHECK_THROWS_AS(typeOfContract(c), TypeError);
}

TEST_CASE("typeOfLabeled: stacks and labeled dependent functions") {
  TypeEnv env;
  LabeledPtr single = mkStack(
      BaseType::Int,
      {LabeledPred{"L", std::nullopt, {}, tm("fun x:Int => x > 0")}});
  CHECK(typeEq(typeOfLabeled(env, single), tInt()));

  LabeledPtr fn = mkLDepFun(
      "x", mkStack(BaseType::Int, {}),
      mkStack(BaseType::Int,
              {LabeledPred{"L", std::nullopt, {}, tm("fun y:Int => y >= 0")}}));
  CHECK(typeEq(typeOfLabeled(env, fn), tArrow(tInt(), tInt())));

  LabeledPtr hetero = mkStack(
      BaseType::Int,
      {LabeledPred{"L", std::nullopt, {}, tm("fun x:Int => x > 0")},
       LabeledPred{"L2", std::nullopt, {}, tm("fun b:Bool => b")}});
  CHECK_THROWS_AS(typeOfLabeled(env, hetero), TypeError);
}

TEST_CASE("err types as the Any wildcard") {
  CHECK(typesCompatible(typeOfTerm(mkErr("L")), tInt()));
  CHECK(typesCompatible(typeOfTerm(mkErr("L")), tArrow(tInt(), tBool())));
  CHECK(typeEq(typeOfTerm(tm("if true then 1 else err^L")), tInt()));
}

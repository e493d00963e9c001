#include <doctest.h>

#include "cpcf/harness.hpp"
#include "cpcf/surface.hpp"
#include "cpcf/types.hpp"
#include "test_util.hpp"

using namespace cpcf;
using cpcftest::impliesFn;

TEST_CASE("genProgram is deterministic in seed and trial") {
  GenConfig cfg = defaultGenConfig();
  for (std::uint64_t i = 0; i < 20; ++i) {
    CHECK(alphaEq(genProgram(cfg, i), genProgram(cfg, i)));
  }
  cfg.seed = 2;
  bool anyDiff = false;
  GenConfig base = defaultGenConfig();
  for (std::uint64_t i = 0; i < 20 && !anyDiff; ++i) {
    anyDiff = !alphaEq(genProgram(base, i), genProgram(cfg, i));
  }
  CHECK(anyDiff);
}

TEST_CASE("generated programs are closed, well typed, base-result sources") {
  GenConfig cfg = defaultGenConfig();
  ImplicationEngine eq;
  auto implies = impliesFn(eq);
  for (std::uint64_t i = 0; i < 300; ++i) {
    TermPtr t = genProgram(cfg, i);
    CHECK(freeVars(t).empty());
    CHECK(isSourceProgram(t));
    TypePtr ty = typeOfTerm(t);
    CHECK(std::holds_alternative<Type::Base>(ty->node));
    CHECK(isSimple(t, implies));  // dependentContracts off
  }
}

TEST_CASE("dependent generation produces open codomain predicates") {
  GenConfig cfg = defaultGenConfig();
  cfg.dependentContracts = true;
  ImplicationEngine eq;
  auto implies = impliesFn(eq);
  bool sawNonSimple = false;
  for (std::uint64_t i = 0; i < 300 && !sawNonSimple; ++i) {
    TermPtr t = genProgram(cfg, i);
    CHECK(typeOfTerm(t) != nullptr);
    sawNonSimple = !isSimple(t, implies);
  }
  CHECK(sawNonSimple);
}

TEST_CASE("diffTest: no disagreements on a small run") {
  GenConfig cfg = defaultGenConfig();
  ImplicationEngine eq;
  DiffReport r = diffTest(cfg, 150, eq);
  CHECK(r.total == 150);
  CHECK(r.disagreements.empty());
  CHECK(r.agreed + r.inconclusive == r.total);
}

TEST_CASE("congruenceTest: no failures on a small run") {
  GenConfig cfg = defaultGenConfig();
  ImplicationEngine eq;
  CongruenceReport r = congruenceTest(500, cfg, eq);
  CHECK(r.total == 500);
  CHECK(r.failures.empty());
}

TEST_CASE("outcomesAgree") {
  Outcome v5 = Outcome::mkValue(mkInt(5), 1);
  Outcome v6 = Outcome::mkValue(mkInt(6), 1);
  Outcome bl = Outcome::mkBlame("l", 1);
  Outcome bl2 = Outcome::mkBlame("l2", 1);
  Outcome oof = Outcome::mkOutOfFuel(1);
  CHECK(outcomesAgree(v5, v5));
  CHECK_FALSE(outcomesAgree(v5, v6));
  CHECK(outcomesAgree(bl, bl));
  CHECK_FALSE(outcomesAgree(bl, bl2));
  CHECK_FALSE(outcomesAgree(v5, bl));
  CHECK(outcomesAgree(oof, v5));  // inconclusive counts as agreement
  CHECK(outcomesAgree(v5, oof));
}

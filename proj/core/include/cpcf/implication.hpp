// The predicate-implication engine: syntactic-equality baseline plus user
// rules, and sampling-based verification of the pre-order axioms.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpcf/ast.hpp"
#include "cpcf/eval_common.hpp"
#include "cpcf/rules.hpp"

namespace cpcf {

// A rule condition produced Blame or ran out of fuel: the rule is
// ill-behaved and the query cannot be answered.
struct RuleEvalError : std::runtime_error {
  RuleEvalError(std::string left, std::string right, Outcome::Kind k,
                const std::string& what)
      : std::runtime_error(what),
        leftPred(std::move(left)),
        rightPred(std::move(right)),
        kind(k) {}
  std::string leftPred;
  std::string rightPred;
  Outcome::Kind kind;
};

class ImplicationEngine {
 public:
  ImplicationEngine() = default;
  explicit ImplicationEngine(RuleSet rules, long conditionFuel = 10000)
      : rules_(std::move(rules)), conditionFuel_(conditionFuel) {}

  // true iff bodies are alpha-equal with pointwise-equal sigmas, or a rule
  // keyed on both predicate names has a condition evaluating to true.
  bool implies(const Pred& p1, const Pred& p2) const;
  bool implies(const LabeledPred& p1, const LabeledPred& p2) const;

  const RuleSet& rules() const { return rules_; }
  long conditionFuel() const { return conditionFuel_; }
  // Number of RuleEvalErrors raised so far (ill-behaved rule encounters).
  long warningCount() const { return warnings_; }

 private:
  RuleSet rules_;
  long conditionFuel_ = 10000;
  mutable long warnings_ = 0;
  mutable std::map<std::pair<std::string, std::string>, bool> memo_;
};

// Result of checking one axiom; a failure carries a printable counterexample.
struct AxiomResult {
  bool ok = true;
  std::string counterexample;
};

struct AxiomReport {
  AxiomResult reflexivity;
  AxiomResult transitivity;
  AxiomResult substitutivity;
  AxiomResult adequacy;
  AxiomResult decidability;  // pass by construction (fuel-bounded)
  // For a failed adequacy check: the witness constant k and the pair.
  std::optional<TermPtr> adequacyWitness;
  std::optional<Pred> adequacyLeft;
  std::optional<Pred> adequacyRight;

  bool allOk() const {
    return reflexivity.ok && transitivity.ok && substitutivity.ok &&
           adequacy.ok && decidability.ok;
  }
};

// Checks the pre-order axioms on a sample pool. Reflexivity is exact over
// the pool; transitivity over deterministically sampled triples;
// substitutivity over sampled (pair, value) instances; adequacy over the
// per-base constant samples (integers additionally widened by sigma-derived
// values +/- 2). constSamples may omit a base type; defaults are
// {-17..17} for Int and {true, false} for Bool.
AxiomReport verifyAxioms(
    const ImplicationEngine& engine, const std::vector<Pred>& samplePool,
    const std::map<BaseType, std::vector<TermPtr>>& constSamples = {},
    long tripleSamples = 2000);

// Pool construction for axiom verification: every predicate occurring in the
// program, names preserved. Closed predicates enter as-is; predicates with
// free variables (at most two) are instantiated over a deterministic grid of
// integer constants [gridLo..gridHi] plus the booleans, keeping only
// instantiations that type at B -> Bool.
std::vector<Pred> buildPredPool(const TermPtr& program, long gridLo = -8,
                                long gridHi = 12);

}  // namespace cpcf

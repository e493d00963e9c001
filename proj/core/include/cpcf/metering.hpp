// Predicate extraction (preds), static size accounting (P_B, S_B, size), and
// structural runtime space censuses collected during evaluation.
#pragma once

#include <map>
#include <set>
#include <string>

#include "cpcf/ast.hpp"
#include "cpcf/eval_common.hpp"

namespace cpcf {

class ImplicationEngine;  // implication.hpp

// A predicate occurrence (e, sigma): identity is alpha-equality of the body
// together with pointwise value equality of sigma.
struct PredKey {
  TermPtr body;
  ClosingSubstitution sigma;
  std::string key;  // canonicalKeyPred(sigma, body)

  bool operator<(const PredKey& o) const { return key < o.key; }
  bool operator==(const PredKey& o) const { return key == o.key; }
};

using PredKeySet = std::set<PredKey>;

PredKeySet predsTerm(const TermPtr& e);
PredKeySet predsContract(const ContractPtr& c);
PredKeySet predsLabeled(const LabeledPtr& c);

// P_B: number of distinct predicates at each base type in e (keys whose
// sigma-applied bodies type at B -> Bool).
std::map<BaseType, long> predCountsPerBase(const TermPtr& e);

struct SizeParams {
  long labelBits = 8;  // L: bits needed to represent a blame label
};

// S_B = L * P_B * ceil(log2 max(P_B, 2)) with a floor of 1 bit for the log.
long stackBits(long predCount, const SizeParams& params);

// size of a contract in bits: predicates cost S_B for their base type;
// function contracts sum their parts.
long sizeOfContract(const ContractPtr& c,
                    const std::map<BaseType, long>& sourcePredCounts,
                    const SizeParams& params);

// Structural census of a term: used by the deep-statistics evaluator mode.
struct StructuralCensus {
  long monitorCount = 0;       // total MonC + MonE nodes
  long maxStackLength = 0;     // longest predicate stack anywhere
  std::map<BaseType, long> maxStackPerBase;
  long totalStackEntries = 0;  // sum of all stack lengths
};
StructuralCensus scanTerm(const TermPtr& e);

// Checks the non-increase of preds(e) along the reduction sequence of a
// simple program (Lemma: reduction is non-increasing in simple predicates).
enum class EvalMode { Classic, Eff };

struct MonotoneReport {
  bool ok = true;
  long steps = 0;
  long violationStep = -1;   // first step where preds grew, if any
  std::string violationKey;  // offending predicate key
  Outcome::Kind finalKind = Outcome::Kind::OutOfFuel;
};

struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

// Pre: isSimple(e) under the engine in force (PreconditionError otherwise).
MonotoneReport checkPredsMonotone(const TermPtr& e, EvalMode mode,
                                  const ImplicationEngine& engine, long fuel);

}  // namespace cpcf

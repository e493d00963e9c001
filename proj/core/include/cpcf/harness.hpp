// Random well-typed program generation and differential testing between the
// classic and space-efficient semantics.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cpcf/ast.hpp"
#include "cpcf/eval_common.hpp"
#include "cpcf/eval_space.hpp"
#include "cpcf/implication.hpp"

namespace cpcf {

struct GenConfig {
  std::uint64_t seed = 1;
  int maxDepth = 5;
  // Named closed predicates per base type (each body types at B -> Bool).
  std::map<BaseType, std::vector<Pred>> predicatePool;
  bool dependentContracts = false;
  int recursionBudget = 6;  // max iterations of generated countdown loops
  long fuel = 100000;
};

// Pool with a handful of integer and boolean predicates.
GenConfig defaultGenConfig();

// Deterministic in cfg.seed and the trial index. The result is closed, well
// typed, a source program with a base-typed result, and simple whenever
// dependentContracts is off.
TermPtr genProgram(const GenConfig& cfg);
TermPtr genProgram(const GenConfig& cfg, std::uint64_t trial);

// A random labeled contract for values of base type b (used by the
// congruence property).
LabeledPtr genLabeledBaseContract(const GenConfig& cfg, std::uint64_t trial,
                                  BaseType b);

struct Disagreement {
  std::string program;  // printed (already shrunk) term
  Outcome classic;
  Outcome efficient;
};

struct DiffReport {
  long total = 0;
  long agreed = 0;
  long blameAgreed = 0;  // subset of agreed that agreed on a blame label
  long inconclusive = 0;
  std::vector<Disagreement> disagreements;
};

DiffReport diffTest(const GenConfig& cfg, long n,
                    const ImplicationEngine& engine);

struct CongruenceReport {
  long total = 0;
  long agreed = 0;
  long skipped = 0;  // generated subject was already a value
  std::vector<std::string> failures;
};

CongruenceReport congruenceTest(long samples, const GenConfig& cfg,
                                const ImplicationEngine& engine);

// Outcome agreement: equal constants at base type or equal blame labels;
// OutOfFuel on either side is inconclusive (reported as agreement here).
bool outcomesAgree(const Outcome& a, const Outcome& b);

}  // namespace cpcf

// Shared evaluator plumbing: outcomes, step results, traces, and the runtime
// space statistics populated while stepping.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpcf/ast.hpp"

namespace cpcf {

struct Outcome {
  enum class Kind { Value, Blame, OutOfFuel };
  Kind kind;
  TermPtr value;        // when Value
  std::string label;    // when Blame
  long stepsUsed = 0;

  static Outcome mkValue(TermPtr v, long steps) {
    return Outcome{Kind::Value, std::move(v), "", steps};
  }
  static Outcome mkBlame(std::string l, long steps) {
    return Outcome{Kind::Blame, nullptr, std::move(l), steps};
  }
  static Outcome mkOutOfFuel(long steps) {
    return Outcome{Kind::OutOfFuel, nullptr, "", steps};
  }
};

struct StepEntry {
  std::string rule;  // one of the operational rule names (E-Beta ... E-MonCJoin)
  TermPtr term;      // term after the step
};
using StepTrace = std::vector<StepEntry>;

struct SeriesPoint {
  long step;
  long monitorNesting;
  long totalStackEntries;
};

// Per-run space metrics. peakMonitorNesting is the pending-monitor measure:
// the maximum number of monitor nodes strictly enclosing the active redex
// (the depth of monitors on the evaluation context). peakMonitorCount and the
// stack/pred censuses are structural maxima over observed terms; the
// structural scans run only when deep statistics are requested.
struct EvalStats {
  long steps = 0;
  long peakMonitorNesting = 0;
  long peakMonitorCount = 0;   // max total monitor nodes in the term (deep)
  long peakStackLength = 0;    // max predicate-stack length anywhere
  std::map<BaseType, long> peakStackPerBase;
  long livePredPeak = 0;       // max |preds(term)| (deep)
  std::vector<SeriesPoint> series;
};

struct EvalOptions {
  long fuel = 100000;
  bool trace = false;
  bool deepStats = false;      // per-step structural scans (monitor/pred census)
  bool collectSeries = false;  // per-step (step, nesting, stack entries)
  long seriesCap = 100000;
  size_t traceTermLimit = 0;   // 0 = unlimited; else truncate printed terms
};

struct EvalResult {
  Outcome outcome;
  EvalStats stats;
  StepTrace trace;
};

// Signals an evaluator bug: a closed well-typed term with no applicable rule.
struct StuckTerm : std::logic_error {
  using std::logic_error::logic_error;
};

// One small step: either a rewritten term (with the rule applied at the redex
// and the number of monitors strictly enclosing that redex), or the
// observation that the term is already a value / an error.
struct StepResult {
  enum class Kind { Stepped, AlreadyValue, AlreadyError };
  Kind kind;
  TermPtr term;            // when Stepped
  const char* rule = "";   // when Stepped
  long redexMonitorDepth = 0;
};

}  // namespace cpcf

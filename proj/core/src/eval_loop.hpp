// Internal: shared fuel/statistics loop for both evaluators.
#pragma once

#include <algorithm>

#include "cpcf/eval_common.hpp"
#include "cpcf/metering.hpp"
#include "cpcf/subst.hpp"

namespace cpcf {
namespace detail {

struct Rewrite {
  TermPtr term;
  const char* rule;
  long depth;  // monitors strictly enclosing the redex
};

inline std::string errLabelOf(const TermPtr& e) {
  return std::get<Term::Err>(e->node).label;
}

inline bool isErr(const TermPtr& e) {
  return std::holds_alternative<Term::Err>(e->node);
}

template <typename StepFn>
EvalResult runLoop(const TermPtr& e, const EvalOptions& opts, StepFn stepOnce) {
  FreshNameScope freshScope;
  EvalResult res;
  EvalStats& st = res.stats;
  bool deep = opts.deepStats || opts.collectSeries;
  TermPtr term = e;

  auto observe = [&](const TermPtr& t, long nesting) -> long {
    long entries = 0;
    if (deep) {
      StructuralCensus c = scanTerm(t);
      st.peakMonitorCount = std::max(st.peakMonitorCount, c.monitorCount);
      st.peakStackLength = std::max(st.peakStackLength, c.maxStackLength);
      for (const auto& [b, n] : c.maxStackPerBase) {
        auto& cur = st.peakStackPerBase[b];
        cur = std::max(cur, n);
      }
      st.livePredPeak =
          std::max(st.livePredPeak, static_cast<long>(predsTerm(t).size()));
      entries = c.totalStackEntries;
    }
    if (opts.collectSeries &&
        static_cast<long>(st.series.size()) < opts.seriesCap) {
      st.series.push_back(SeriesPoint{st.steps, nesting, entries});
    }
    return entries;
  };

  observe(term, 0);  // peaks include the initial term

  for (;;) {
    StepResult s = stepOnce(term);
    if (s.kind == StepResult::Kind::AlreadyValue) {
      res.outcome = Outcome::mkValue(term, st.steps);
      return res;
    }
    if (s.kind == StepResult::Kind::AlreadyError) {
      res.outcome = Outcome::mkBlame(errLabelOf(term), st.steps);
      return res;
    }
    if (st.steps >= opts.fuel) {
      res.outcome = Outcome::mkOutOfFuel(st.steps);
      return res;
    }
    term = s.term;
    ++st.steps;
    st.peakMonitorNesting =
        std::max(st.peakMonitorNesting, s.redexMonitorDepth);
    observe(term, s.redexMonitorDepth);
    if (opts.trace) {
      res.trace.push_back(StepEntry{s.rule, term});
    }
  }
}

}  // namespace detail
}  // namespace cpcf

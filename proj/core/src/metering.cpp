#include "cpcf/metering.hpp"

#include <cmath>
#include <functional>

#include "cpcf/eval_classic.hpp"
#include "cpcf/eval_space.hpp"
#include "cpcf/implication.hpp"
#include "cpcf/subst.hpp"
#include "cpcf/types.hpp"

namespace cpcf {

// ---------------------------------------------------------------------------
// Predicate extraction
// ---------------------------------------------------------------------------

namespace {

void predsTermInto(const TermPtr& e, PredKeySet& out);
void predsContractInto(const ContractPtr& c, PredKeySet& out);
void predsLabeledInto(const LabeledPtr& c, PredKeySet& out);

void predsPairInto(const ClosingSubstitution& sigma, const TermPtr& body,
                   PredKeySet& out) {
  out.insert(PredKey{body, sigma, canonicalKeyPred(sigma, body)});
  for (const auto& [name, value] : sigma) predsTermInto(value, out);
  predsTermInto(body, out);
}

void predsTermInto(const TermPtr& e, PredKeySet& out) {
  struct V {
    PredKeySet& out;
    void operator()(const Term::Var&) {}
    void operator()(const Term::ConstInt&) {}
    void operator()(const Term::ConstBool&) {}
    void operator()(const Term::Err&) {}
    void operator()(const Term::Op& n) {
      predsTermInto(n.lhs, out);
      predsTermInto(n.rhs, out);
    }
    void operator()(const Term::App& n) {
      predsTermInto(n.fn, out);
      predsTermInto(n.arg, out);
    }
    void operator()(const Term::Abs& n) { predsTermInto(n.body, out); }
    void operator()(const Term::Fix& n) { predsTermInto(n.body, out); }
    void operator()(const Term::If& n) {
      predsTermInto(n.cond, out);
      predsTermInto(n.thenBranch, out);
      predsTermInto(n.elseBranch, out);
    }
    void operator()(const Term::MonC& n) {
      predsContractInto(n.contract, out);
      predsTermInto(n.subject, out);
    }
    void operator()(const Term::MonE& n) {
      predsLabeledInto(n.labeled, out);
      predsTermInto(n.subject, out);
    }
  };
  std::visit(V{out}, e->node);
}

void predsContractInto(const ContractPtr& c, PredKeySet& out) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    predsPairInto(p->sigma, p->body, out);
    return;
  }
  const auto& f = std::get<Contract::DepFun>(c->node);
  predsContractInto(f.dom, out);
  predsContractInto(f.cod, out);
}

void predsLabeledInto(const LabeledPtr& c, PredKeySet& out) {
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {
    for (const LabeledPred& p : s->preds) predsPairInto(p.sigma, p.body, out);
    return;
  }
  const auto& f = std::get<LabeledContract::DepFun>(c->node);
  predsLabeledInto(f.dom, out);
  predsLabeledInto(f.cod, out);
}

}  // namespace

PredKeySet predsTerm(const TermPtr& e) {
  PredKeySet out;
  predsTermInto(e, out);
  return out;
}
PredKeySet predsContract(const ContractPtr& c) {
  PredKeySet out;
  predsContractInto(c, out);
  return out;
}
PredKeySet predsLabeled(const LabeledPtr& c) {
  PredKeySet out;
  predsLabeledInto(c, out);
  return out;
}

// ---------------------------------------------------------------------------
// Static size accounting
// ---------------------------------------------------------------------------

namespace {

// Base type a predicate checks: prefer the body's lambda annotation, fall
// back to typing the sigma-applied body.
std::optional<BaseType> predBase(const PredKey& k) {
  if (auto* abs = std::get_if<Term::Abs>(&k.body->node)) {
    if (auto* base = std::get_if<Type::Base>(&abs->paramType->node)) {
      return base->base;
    }
  }
  try {
    TypePtr t = typeOfTerm(applyClosing(k.sigma, k.body));
    if (auto* arrow = std::get_if<Type::Arrow>(&t->node)) {
      if (auto* base = std::get_if<Type::Base>(&arrow->dom->node)) {
        return base->base;
      }
    }
  } catch (const TypeError&) {
  }
  return std::nullopt;
}

}  // namespace

std::map<BaseType, long> predCountsPerBase(const TermPtr& e) {
  std::map<BaseType, long> counts;
  for (const PredKey& k : predsTerm(e)) {
    if (auto b = predBase(k)) ++counts[*b];
  }
  return counts;
}

long stackBits(long predCount, const SizeParams& params) {
  if (predCount <= 0) return 0;
  long log = 1;  // floor of 1 bit when predCount <= 2
  while ((1L << log) < predCount) ++log;
  return params.labelBits * predCount * log;
}

long sizeOfContract(const ContractPtr& c,
                    const std::map<BaseType, long>& sourcePredCounts,
                    const SizeParams& params) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    PredKey k{p->body, p->sigma, canonicalKeyPred(p->sigma, p->body)};
    auto b = predBase(k);
    long count = 0;
    if (b) {
      if (auto it = sourcePredCounts.find(*b); it != sourcePredCounts.end()) {
        count = it->second;
      }
    }
    return stackBits(count, params);
  }
  const auto& f = std::get<Contract::DepFun>(c->node);
  return sizeOfContract(f.dom, sourcePredCounts, params) +
         sizeOfContract(f.cod, sourcePredCounts, params);
}

// ---------------------------------------------------------------------------
// Structural census
// ---------------------------------------------------------------------------

namespace {

void scanTermInto(const TermPtr& e, StructuralCensus& out);
void scanContractInto(const ContractPtr& c, StructuralCensus& out);
void scanLabeledInto(const LabeledPtr& c, StructuralCensus& out);

void scanSigmaInto(const ClosingSubstitution& sigma, const TermPtr& body,
                   StructuralCensus& out) {
  for (const auto& [name, value] : sigma) scanTermInto(value, out);
  scanTermInto(body, out);
}

void scanTermInto(const TermPtr& e, StructuralCensus& out) {
  struct V {
    StructuralCensus& out;
    void operator()(const Term::Var&) {}
    void operator()(const Term::ConstInt&) {}
    void operator()(const Term::ConstBool&) {}
    void operator()(const Term::Err&) {}
    void operator()(const Term::Op& n) {
      scanTermInto(n.lhs, out);
      scanTermInto(n.rhs, out);
    }
    void operator()(const Term::App& n) {
      scanTermInto(n.fn, out);
      scanTermInto(n.arg, out);
    }
    void operator()(const Term::Abs& n) { scanTermInto(n.body, out); }
    void operator()(const Term::Fix& n) { scanTermInto(n.body, out); }
    void operator()(const Term::If& n) {
      scanTermInto(n.cond, out);
      scanTermInto(n.thenBranch, out);
      scanTermInto(n.elseBranch, out);
    }
    void operator()(const Term::MonC& n) {
      ++out.monitorCount;
      scanContractInto(n.contract, out);
      scanTermInto(n.subject, out);
    }
    void operator()(const Term::MonE& n) {
      ++out.monitorCount;
      scanLabeledInto(n.labeled, out);
      scanTermInto(n.subject, out);
    }
  };
  std::visit(V{out}, e->node);
}

void scanContractInto(const ContractPtr& c, StructuralCensus& out) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    scanSigmaInto(p->sigma, p->body, out);
    return;
  }
  const auto& f = std::get<Contract::DepFun>(c->node);
  scanContractInto(f.dom, out);
  scanContractInto(f.cod, out);
}

void scanLabeledInto(const LabeledPtr& c, StructuralCensus& out) {
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {
    long len = static_cast<long>(s->preds.size());
    out.maxStackLength = std::max(out.maxStackLength, len);
    auto& perBase = out.maxStackPerBase[s->base];
    perBase = std::max(perBase, len);
    out.totalStackEntries += len;
    for (const LabeledPred& p : s->preds) scanSigmaInto(p.sigma, p.body, out);
    return;
  }
  const auto& f = std::get<LabeledContract::DepFun>(c->node);
  scanLabeledInto(f.dom, out);
  scanLabeledInto(f.cod, out);
}

}  // namespace

StructuralCensus scanTerm(const TermPtr& e) {
  StructuralCensus out;
  scanTermInto(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Preds monotonicity along reduction
// ---------------------------------------------------------------------------

MonotoneReport checkPredsMonotone(const TermPtr& e, EvalMode mode,
                                  const ImplicationEngine& engine, long fuel) {
  ImpliesFn impliesFn = [&engine](const std::optional<std::string>& n1,
                                  const ClosingSubstitution& s1,
                                  const TermPtr& b1,
                                  const std::optional<std::string>& n2,
                                  const ClosingSubstitution& s2,
                                  const TermPtr& b2) {
    return engine.implies(Pred{n1, s1, b1}, Pred{n2, s2, b2});
  };
  if (!isSimple(e, impliesFn)) {
    throw PreconditionError("checkPredsMonotone requires a simple program");
  }

  FreshNameScope freshScope;
  MonotoneReport report;
  PredKeySet prev = predsTerm(e);
  TermPtr term = e;
  while (report.steps < fuel) {
    StepResult s = mode == EvalMode::Classic
                       ? stepClassic(term)
                       : stepEff(term, engine, DropKey::Removed);
    if (s.kind == StepResult::Kind::AlreadyValue) {
      report.finalKind = Outcome::Kind::Value;
      return report;
    }
    if (s.kind == StepResult::Kind::AlreadyError) {
      report.finalKind = Outcome::Kind::Blame;
      return report;
    }
    term = s.term;
    ++report.steps;
    PredKeySet cur = predsTerm(term);
    for (const PredKey& k : cur) {
      if (!prev.count(k)) {
        if (report.ok) {
          report.ok = false;
          report.violationStep = report.steps;
          report.violationKey = k.key;
        }
        break;
      }
    }
    prev = std::move(cur);
  }
  report.finalKind = Outcome::Kind::OutOfFuel;
  return report;
}

}  // namespace cpcf

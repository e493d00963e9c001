#include "cpcf/eval_space.hpp"

#include <optional>

#include "cpcf/eval_classic.hpp"  // deltaOp
#include "cpcf/subst.hpp"
#include "cpcf/types.hpp"
#include "eval_loop.hpp"

namespace cpcf {

using detail::isErr;
using detail::Rewrite;

// ---------------------------------------------------------------------------
// Contract algebra: label, drop, join, wrap
// ---------------------------------------------------------------------------

namespace {

// Labeling needs the base type for each nil; dependent binders are tracked in
// a type environment so nested codomain predicates type-check.
LabeledPtr labelRec(const std::string& label, const ContractPtr& c,
                    TypeEnv& env) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    TypePtr t = typeOfContract(env, c);
    BaseType base = std::get<Type::Base>(t->node).base;
    return mkStack(base, {LabeledPred{label, p->predName, p->sigma, p->body}});
  }
  const auto& f = std::get<Contract::DepFun>(c->node);
  LabeledPtr dom = labelRec(label, f.dom, env);
  env.push(f.param, typeOfContract(env, f.dom));
  LabeledPtr cod;
  try {
    cod = labelRec(label, f.cod, env);
  } catch (...) {
    env.pop();
    throw;
  }
  env.pop();
  return mkLDepFun(f.param, std::move(dom), std::move(cod));
}

}  // namespace

LabeledPtr labelContract(const std::string& label, const ContractPtr& c) {
  TypeEnv env;
  return labelRec(label, c, env);
}

PredicateStack dropStack(const PredicateStack& r, const Pred& p,
                         const ImplicationEngine& engine, DropKey dropKey) {
  PredicateStack out{r.base, {}};
  Pred probe = p;
  for (const LabeledPred& entry : r.preds) {
    Pred headPred{entry.predName, entry.sigma, entry.body};
    if (engine.implies(probe, headPred)) {
      // Head implied: removed; the recursion keys on the removed predicate
      // (as the defining equations are written) or on the probe.
      if (dropKey == DropKey::Removed) probe = headPred;
    } else {
      out.preds.push_back(entry);
    }
  }
  return out;
}

namespace {

PredicateStack joinStacks(const PredicateStack& r1, const PredicateStack& r2,
                          const ImplicationEngine& engine, DropKey dropKey,
                          size_t from) {
  // join(nil, r2) = r2
  if (from >= r1.preds.size()) return r2;
  // join(pred^l_s(e);r1, r2) = pred^l_s(e) ; drop(join(r1, r2), pred_s(e))
  const LabeledPred& head = r1.preds[from];
  PredicateStack rest = joinStacks(r1, r2, engine, dropKey, from + 1);
  PredicateStack dropped = dropStack(
      rest, Pred{head.predName, head.sigma, head.body}, engine, dropKey);
  dropped.preds.insert(dropped.preds.begin(), head);
  return dropped;
}

}  // namespace

LabeledPtr joinContracts(const LabeledPtr& c1, const LabeledPtr& c2,
                         const ImplicationEngine& engine, DropKey dropKey) {
  auto* s1 = std::get_if<PredicateStack>(&c1->node);
  auto* s2 = std::get_if<PredicateStack>(&c2->node);
  if (s1 && s2) {
    PredicateStack joined = joinStacks(*s1, *s2, engine, dropKey, 0);
    return mkStack(s1->base, std::move(joined.preds));
  }
  auto* f1 = std::get_if<LabeledContract::DepFun>(&c1->node);
  auto* f2 = std::get_if<LabeledContract::DepFun>(&c2->node);
  if (!f1 || !f2) {
    throw StuckTerm("join: contract shape mismatch (stack vs function)");
  }
  // join(x:c11->c12, x:c21->c22) = x: join(c21, c11)
  //                                 -> join(wrap(c12, x, c21), c22)
  // Align the two binders first, avoiding capture of free occurrences.
  std::string param = f1->param;
  LabeledPtr cod1 = f1->cod;
  LabeledPtr cod2 = f2->cod;
  if (f2->param != param) {
    if (freeVarsLabeled(f2->cod).count(param)) {
      std::string fresh = freshName(param);
      cod1 = renameVarLabeled(cod1, param, fresh);
      param = fresh;
    }
    cod2 = renameVarLabeled(f2->cod, f2->param, param);
  }
  LabeledPtr dom = joinContracts(f2->dom, f1->dom, engine, dropKey);
  LabeledPtr cod = joinContracts(
      wrapContract(cod1, param, f2->dom, engine, dropKey), cod2, engine,
      dropKey);
  return mkLDepFun(param, std::move(dom), std::move(cod));
}

LabeledPtr wrapContract(const LabeledPtr& c, const std::string& x,
                        const LabeledPtr& cArg,
                        const ImplicationEngine& engine, DropKey dropKey) {
  if (auto* stack = std::get_if<PredicateStack>(&c->node)) {
    std::vector<LabeledPred> out;
    out.reserve(stack->preds.size());
    for (const LabeledPred& entry : stack->preds) {
      if (!freeVarsPred(entry.sigma, entry.body).count(x)) {
        out.push_back(entry);  // x not mentioned: unchanged
        continue;
      }
      LabeledPred wrapped = entry;
      bool rebound = false;
      for (auto& [name, value] : wrapped.sigma) {
        if (name != x) continue;
        if (auto* m = std::get_if<Term::MonE>(&value->node)) {
          // sigma(x) = mon(c', e'): merge in the new domain contract.
          value = mkMonE(joinContracts(m->labeled, cArg, engine, dropKey),
                         m->subject);
        } else {
          value = mkMonE(cArg, value);
        }
        rebound = true;
        break;
      }
      if (!rebound) {
        // x free in the body but unbound (identity sigma on x).
        wrapped.sigma.emplace_back(x, mkMonE(cArg, mkVar(x)));
      }
      out.push_back(std::move(wrapped));
    }
    return mkStack(stack->base, std::move(out));
  }
  const auto& f = std::get<LabeledContract::DepFun>(c->node);
  LabeledPtr dom = wrapContract(f.dom, x, cArg, engine, dropKey);
  if (f.param == x) {
    // The binder shadows x in the codomain.
    return mkLDepFun(f.param, std::move(dom), f.cod);
  }
  std::string param = f.param;
  LabeledPtr cod = f.cod;
  if (freeVarsLabeled(cArg).count(param)) {
    std::string fresh = freshName(param);
    cod = renameVarLabeled(cod, param, fresh);
    param = fresh;
  }
  cod = wrapContract(cod, x, cArg, engine, dropKey);
  return mkLDepFun(param, std::move(dom), std::move(cod));
}

// ---------------------------------------------------------------------------
// Stepping
// ---------------------------------------------------------------------------

bool isEffValue(const TermPtr& e) {
  if (std::holds_alternative<Term::ConstInt>(e->node) ||
      std::holds_alternative<Term::ConstBool>(e->node) ||
      std::holds_alternative<Term::Abs>(e->node)) {
    return true;
  }
  // Single-proxy invariant: a proxy value wraps a bare lambda.
  if (const auto* mon = std::get_if<Term::MonE>(&e->node)) {
    return std::holds_alternative<LabeledContract::DepFun>(
               mon->labeled->node) &&
           std::holds_alternative<Term::Abs>(mon->subject->node);
  }
  return false;
}

namespace {

std::optional<Rewrite> stepES(const TermPtr& e, const ImplicationEngine& engine,
                              DropKey dropKey, long depth) {
  struct V {
    const TermPtr& e;
    const ImplicationEngine& engine;
    DropKey dropKey;
    long depth;
    using R = std::optional<Rewrite>;

    R rec(const TermPtr& t, long d) { return stepES(t, engine, dropKey, d); }

    R operator()(const Term::Var& n) {
      throw StuckTerm("free variable '" + n.name + "' reached at runtime");
    }
    R operator()(const Term::ConstInt&) { return std::nullopt; }
    R operator()(const Term::ConstBool&) { return std::nullopt; }
    R operator()(const Term::Abs&) { return std::nullopt; }
    R operator()(const Term::Err&) { return std::nullopt; }

    R operator()(const Term::Op& n) {
      if (isErr(n.lhs)) return Rewrite{n.lhs, "E-OpRaiseL", depth};
      if (auto s = rec(n.lhs, depth)) {
        s->term = mkOp(n.op, s->term, n.rhs);
        return s;
      }
      if (isErr(n.rhs)) return Rewrite{n.rhs, "E-OpRaiseR", depth};
      if (auto s = rec(n.rhs, depth)) {
        s->term = mkOp(n.op, n.lhs, s->term);
        return s;
      }
      return Rewrite{deltaOp(n.op, n.lhs, n.rhs), "E-Delta", depth};
    }

    R operator()(const Term::App& n) {
      if (isErr(n.fn)) return Rewrite{n.fn, "E-AppRaiseL", depth};
      if (auto s = rec(n.fn, depth)) {
        s->term = mkApp(s->term, n.arg);
        return s;
      }
      if (isErr(n.arg)) return Rewrite{n.arg, "E-AppRaiseR", depth};
      if (auto s = rec(n.arg, depth)) {
        s->term = mkApp(n.fn, s->term);
        return s;
      }
      if (auto* abs = std::get_if<Term::Abs>(&n.fn->node)) {
        return Rewrite{substTerm(abs->body, abs->param, n.arg), "E-Beta",
                       depth};
      }
      if (auto* mon = std::get_if<Term::MonE>(&n.fn->node)) {
        // E-MonCApp: mon(x:c1->c2, vf) v -> mon(c2[v/x], vf (mon(c1, v)))
        const auto& f = std::get<LabeledContract::DepFun>(mon->labeled->node);
        TermPtr wrappedArg = mkMonE(f.dom, n.arg);
        LabeledPtr cod = substLabeled(f.cod, f.param, n.arg);
        return Rewrite{mkMonE(cod, mkApp(mon->subject, wrappedArg)),
                       "E-MonCApp", depth};
      }
      throw StuckTerm("application of a non-function value");
    }

    R operator()(const Term::Fix& n) {
      return Rewrite{substTerm(n.body, n.param, e), "E-Fix", depth};
    }

    R operator()(const Term::If& n) {
      if (isErr(n.cond)) return Rewrite{n.cond, "E-IfRaise", depth};
      if (auto s = rec(n.cond, depth)) {
        s->term = mkIf(s->term, n.thenBranch, n.elseBranch);
        return s;
      }
      if (auto* b = std::get_if<Term::ConstBool>(&n.cond->node)) {
        return b->value ? Rewrite{n.thenBranch, "E-IfTrue", depth}
                        : Rewrite{n.elseBranch, "E-IfFalse", depth};
      }
      throw StuckTerm("if condition is not a boolean value");
    }

    R operator()(const Term::MonC& n) {
      // E-MonLabel: enter the labeled world before anything else happens.
      return Rewrite{mkMonE(labelContract(n.label, n.contract), n.subject),
                     "E-MonLabel", depth};
    }

    R operator()(const Term::MonE& n) {
      if (isErr(n.subject)) return Rewrite{n.subject, "E-MonCRaise", depth};
      if (auto* inner = std::get_if<Term::MonE>(&n.subject->node)) {
        // E-MonCJoin: mon(c2, mon(c1, e)) -> mon(join(c1, c2), e); fires
        // before any congruence under c2.
        return Rewrite{
            mkMonE(joinContracts(inner->labeled, n.labeled, engine, dropKey),
                   inner->subject),
            "E-MonCJoin", depth};
      }
      if (auto* stack = std::get_if<PredicateStack>(&n.labeled->node)) {
        if (isEffValue(n.subject)) {
          if (stack->preds.empty()) {
            return Rewrite{n.subject, "E-MonCNil", depth};
          }
          // E-MonCPred: check the head, keep the tail pending.
          const LabeledPred& head = stack->preds[0];
          TermPtr check =
              mkApp(applyClosing(head.sigma, head.body), n.subject);
          LabeledPtr rest = mkStack(
              stack->base, {stack->preds.begin() + 1, stack->preds.end()});
          return Rewrite{mkIf(check, mkMonE(std::move(rest), n.subject),
                              mkErr(head.label)),
                         "E-MonCPred", depth};
        }
      } else if (isEffValue(e)) {
        return std::nullopt;  // function proxy value
      }
      // E-MonC: congruence — the subject is not itself a monitor here.
      if (auto s = rec(n.subject, depth + 1)) {
        s->term = mkMonE(n.labeled, s->term);
        return s;
      }
      throw StuckTerm("monitored subject neither steps nor is a value");
    }
  };
  return std::visit(V{e, engine, dropKey, depth}, e->node);
}

}  // namespace

StepResult stepEff(const TermPtr& e, const ImplicationEngine& engine,
                   DropKey dropKey) {
  if (isErr(e)) return StepResult{StepResult::Kind::AlreadyError, nullptr};
  if (auto s = stepES(e, engine, dropKey, 0)) {
    return StepResult{StepResult::Kind::Stepped, s->term, s->rule, s->depth};
  }
  if (isEffValue(e)) return StepResult{StepResult::Kind::AlreadyValue, nullptr};
  throw StuckTerm("no applicable efficient rule");
}

EvalResult evalEff(const TermPtr& e, const ImplicationEngine& engine,
                   const EvalOptions& opts, DropKey dropKey) {
  return detail::runLoop(e, opts, [&](const TermPtr& t) {
    return stepEff(t, engine, dropKey);
  });
}

Outcome evalEffOutcome(const TermPtr& e, const ImplicationEngine& engine,
                       long fuel) {
  EvalOptions opts;
  opts.fuel = fuel;
  return evalEff(e, engine, opts).outcome;
}

}  // namespace cpcf

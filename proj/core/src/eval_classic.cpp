#include "cpcf/eval_classic.hpp"

#include <optional>

#include "cpcf/subst.hpp"
#include "eval_loop.hpp"

namespace cpcf {

using detail::isErr;
using detail::Rewrite;

bool isClassicValue(const TermPtr& e) {
  if (std::holds_alternative<Term::ConstInt>(e->node) ||
      std::holds_alternative<Term::ConstBool>(e->node) ||
      std::holds_alternative<Term::Abs>(e->node)) {
    return true;
  }
  // Function proxies mon^l(x:C1 -> C2, v) are values; arbitrarily nested.
  if (const auto* mon = std::get_if<Term::MonC>(&e->node)) {
    return std::holds_alternative<Contract::DepFun>(mon->contract->node) &&
           isClassicValue(mon->subject);
  }
  return false;
}

TermPtr deltaOp(OpTag op, const TermPtr& lhs, const TermPtr& rhs) {
  if (op == OpTag::Or || op == OpTag::And) {
    bool a = std::get<Term::ConstBool>(lhs->node).value;
    bool b = std::get<Term::ConstBool>(rhs->node).value;
    return mkBool(op == OpTag::Or ? (a || b) : (a && b));
  }
  const Int& a = std::get<Term::ConstInt>(lhs->node).value;
  const Int& b = std::get<Term::ConstInt>(rhs->node).value;
  switch (op) {
    case OpTag::Add: return mkInt(a + b);
    case OpTag::Sub: return mkInt(a - b);
    case OpTag::Mul: return mkInt(a * b);
    case OpTag::Mod:
      // mod by zero blames the reserved label div0.
      if (b == 0) return mkErr("div0");
      return mkInt(a % b);
    case OpTag::Eq: return mkBool(a == b);
    case OpTag::Lt: return mkBool(a < b);
    case OpTag::Le: return mkBool(a <= b);
    case OpTag::Gt: return mkBool(a > b);
    case OpTag::Ge: return mkBool(a >= b);
    default: break;
  }
  throw StuckTerm("deltaOp: bad operands");
}

namespace {

std::optional<Rewrite> stepC(const TermPtr& e, long depth) {
  struct V {
    const TermPtr& e;
    long depth;
    using R = std::optional<Rewrite>;

    R operator()(const Term::Var& n) {
      throw StuckTerm("free variable '" + n.name + "' reached at runtime");
    }
    R operator()(const Term::ConstInt&) { return std::nullopt; }
    R operator()(const Term::ConstBool&) { return std::nullopt; }
    R operator()(const Term::Abs&) { return std::nullopt; }
    R operator()(const Term::Err&) { return std::nullopt; }  // caller handles

    R operator()(const Term::Op& n) {
      if (isErr(n.lhs)) return Rewrite{n.lhs, "E-OpRaiseL", depth};
      if (auto s = stepC(n.lhs, depth)) {
        s->term = mkOp(n.op, s->term, n.rhs);
        return s;
      }
      if (isErr(n.rhs)) return Rewrite{n.rhs, "E-OpRaiseR", depth};
      if (auto s = stepC(n.rhs, depth)) {
        s->term = mkOp(n.op, n.lhs, s->term);
        return s;
      }
      return Rewrite{deltaOp(n.op, n.lhs, n.rhs), "E-Delta", depth};
    }

    R operator()(const Term::App& n) {
      if (isErr(n.fn)) return Rewrite{n.fn, "E-AppRaiseL", depth};
      if (auto s = stepC(n.fn, depth)) {
        s->term = mkApp(s->term, n.arg);
        return s;
      }
      if (isErr(n.arg)) return Rewrite{n.arg, "E-AppRaiseR", depth};
      if (auto s = stepC(n.arg, depth)) {
        s->term = mkApp(n.fn, s->term);
        return s;
      }
      if (auto* abs = std::get_if<Term::Abs>(&n.fn->node)) {
        return Rewrite{substTerm(abs->body, abs->param, n.arg), "E-Beta", depth};
      }
      if (auto* mon = std::get_if<Term::MonC>(&n.fn->node)) {
        // E-MonApp (lax): mon^l(x:C1->C2, vf) v
        //   -> mon^l(C2[v/x], vf (mon^l(C1, v)))
        const auto& f = std::get<Contract::DepFun>(mon->contract->node);
        TermPtr wrappedArg = mkMonC(mon->label, f.dom, n.arg);
        ContractPtr cod = substContract(f.cod, f.param, n.arg);
        return Rewrite{
            mkMonC(mon->label, cod, mkApp(mon->subject, wrappedArg)),
            "E-MonApp", depth};
      }
      throw StuckTerm("application of a non-function value");
    }

    R operator()(const Term::Fix& n) {
      return Rewrite{substTerm(n.body, n.param, e), "E-Fix", depth};
    }

    R operator()(const Term::If& n) {
      if (isErr(n.cond)) return Rewrite{n.cond, "E-IfRaise", depth};
      if (auto s = stepC(n.cond, depth)) {
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
      if (isErr(n.subject)) return Rewrite{n.subject, "E-MonRaise", depth};
      if (auto* p = std::get_if<Pred>(&n.contract->node)) {
        if (isClassicValue(n.subject)) {
          // E-MonPred: mon^l(pred_sigma(e), v) -> if (sigma(e)) v then v
          //            else err^l
          TermPtr check = mkApp(applyClosing(p->sigma, p->body), n.subject);
          return Rewrite{mkIf(check, n.subject, mkErr(n.label)), "E-MonPred",
                         depth};
        }
      } else if (isClassicValue(e)) {
        return std::nullopt;  // function proxy value
      }
      // E-Mon: congruence under the monitor.
      if (auto s = stepC(n.subject, depth + 1)) {
        s->term = mkMonC(n.label, n.contract, s->term);
        return s;
      }
      throw StuckTerm("monitored subject neither steps nor is a value");
    }

    R operator()(const Term::MonE&) {
      throw StuckTerm("labeled monitor mon(c, e) in classic mode");
    }
  };
  return std::visit(V{e, depth}, e->node);
}

}  // namespace

StepResult stepClassic(const TermPtr& e) {
  if (isErr(e)) return StepResult{StepResult::Kind::AlreadyError, nullptr};
  if (auto s = stepC(e, 0)) {
    return StepResult{StepResult::Kind::Stepped, s->term, s->rule, s->depth};
  }
  if (isClassicValue(e)) {
    return StepResult{StepResult::Kind::AlreadyValue, nullptr};
  }
  throw StuckTerm("no applicable classic rule");
}

EvalResult evalClassic(const TermPtr& e, const EvalOptions& opts) {
  return detail::runLoop(e, opts, stepClassic);
}

Outcome evalClassicOutcome(const TermPtr& e, long fuel) {
  EvalOptions opts;
  opts.fuel = fuel;
  return evalClassic(e, opts).outcome;
}

}  // namespace cpcf

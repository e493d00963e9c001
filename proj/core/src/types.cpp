#include "cpcf/types.hpp"

#include <sstream>

namespace cpcf {

std::string showType(const TypePtr& t) {
  if (auto* b = std::get_if<Type::Base>(&t->node)) {
    return b->base == BaseType::Int ? "Int" : "Bool";
  }
  if (auto* a = std::get_if<Type::Arrow>(&t->node)) {
    std::string dom = showType(a->dom);
    if (std::holds_alternative<Type::Arrow>(a->dom->node)) {
      dom = "(" + dom + ")";
    }
    return dom + " -> " + showType(a->cod);
  }
  return "<any>";
}

namespace {

[[noreturn]] void fail(TypeErrorKind kind, const std::string& msg) {
  throw TypeError(kind, msg);
}

TypePtr expectCompatible(const TypePtr& expected, const TypePtr& actual,
                         const std::string& where) {
  TypePtr m = typeMeet(expected, actual);
  if (!m) {
    fail(TypeErrorKind::Mismatch, where + ": expected " + showType(expected) +
                                      ", got " + showType(actual));
  }
  return m;
}

// Types the sigma entries of a predicate, pushing each binding onto env.
// Returns the number of pushed bindings. Entries are typed under the ambient
// environment: classic-mode ranges are closed values, efficient-mode ranges
// may mention in-scope variables (wrap installs x -> mon(c, x)).
size_t pushSigma(TypeEnv& env, const ClosingSubstitution& sigma) {
  size_t pushed = 0;
  for (const auto& [name, value] : sigma) {
    TypePtr t;
    try {
      t = typeOfTerm(env, value);
    } catch (const TypeError& e) {
      fail(TypeErrorKind::BadSubstitution,
           "closing substitution entry for '" + name + "': " + e.detail);
    }
    env.push(name, t);
    ++pushed;
  }
  return pushed;
}

// Γ,Γσ ⊢ body : B -> Bool, yielding Base(B).
TypePtr typeOfPredParts(TypeEnv& env, const ClosingSubstitution& sigma,
                        const TermPtr& body) {
  size_t pushed = pushSigma(env, sigma);
  TypePtr bt;
  try {
    bt = typeOfTerm(env, body);
  } catch (...) {
    for (size_t i = 0; i < pushed; ++i) env.pop();
    throw;
  }
  for (size_t i = 0; i < pushed; ++i) env.pop();
  auto* arrow = std::get_if<Type::Arrow>(&bt->node);
  if (!arrow) {
    fail(TypeErrorKind::BadPredicateType,
         "predicate body must be a function B -> Bool, got " + showType(bt));
  }
  auto* domBase = std::get_if<Type::Base>(&arrow->dom->node);
  auto* codBase = std::get_if<Type::Base>(&arrow->cod->node);
  if (!domBase || !codBase || codBase->base != BaseType::Bool) {
    fail(TypeErrorKind::BadPredicateType,
         "predicate body must be a function B -> Bool, got " + showType(bt));
  }
  return tBase(domBase->base);
}

}  // namespace

TypePtr typeOfTerm(TypeEnv& env, const TermPtr& e) {
  struct V {
    TypeEnv& env;
    TypePtr operator()(const Term::Var& n) {
      const TypePtr* t = env.lookup(n.name);
      if (!t) fail(TypeErrorKind::UnboundVar, "unbound variable '" + n.name + "'");
      return *t;
    }
    TypePtr operator()(const Term::ConstInt&) { return tInt(); }
    TypePtr operator()(const Term::ConstBool&) { return tBool(); }
    TypePtr operator()(const Term::Err&) { return tAny(); }  // T-Blame
    TypePtr operator()(const Term::Op& n) {
      OpSig sig = opSignature(n.op);
      TypePtr lt = typeOfTerm(env, n.lhs);
      TypePtr rt = typeOfTerm(env, n.rhs);
      expectCompatible(tBase(sig.lhs), lt,
                       std::string("left operand of ") + opSymbol(n.op));
      expectCompatible(tBase(sig.rhs), rt,
                       std::string("right operand of ") + opSymbol(n.op));
      return tBase(sig.result);
    }
    TypePtr operator()(const Term::App& n) {
      TypePtr ft = typeOfTerm(env, n.fn);
      TypePtr at = typeOfTerm(env, n.arg);
      if (std::holds_alternative<Type::Any>(ft->node)) return tAny();
      auto* arrow = std::get_if<Type::Arrow>(&ft->node);
      if (!arrow) {
        fail(TypeErrorKind::NotAFunction,
             "application of non-function of type " + showType(ft));
      }
      expectCompatible(arrow->dom, at, "function argument");
      return arrow->cod;
    }
    TypePtr operator()(const Term::Abs& n) {
      env.push(n.param, n.paramType);
      TypePtr bt = typeOfTerm(env, n.body);
      env.pop();
      return tArrow(n.paramType, bt);
    }
    TypePtr operator()(const Term::Fix& n) {
      env.push(n.param, n.paramType);
      TypePtr bt = typeOfTerm(env, n.body);
      env.pop();
      expectCompatible(n.paramType, bt, "mu body");
      return n.paramType;
    }
    TypePtr operator()(const Term::If& n) {
      TypePtr ct = typeOfTerm(env, n.cond);
      expectCompatible(tBool(), ct, "if condition");
      TypePtr tt = typeOfTerm(env, n.thenBranch);
      TypePtr et = typeOfTerm(env, n.elseBranch);
      TypePtr m = typeMeet(tt, et);
      if (!m) {
        fail(TypeErrorKind::Mismatch, "if branches disagree: " + showType(tt) +
                                          " vs " + showType(et));
      }
      return m;
    }
    TypePtr operator()(const Term::MonC& n) {  // T-Mon
      TypePtr ct = typeOfContract(env, n.contract);
      TypePtr st = typeOfTerm(env, n.subject);
      return expectCompatible(ct, st, "monitored term");
    }
    TypePtr operator()(const Term::MonE& n) {  // T-MonC
      TypePtr ct = typeOfLabeled(env, n.labeled);
      TypePtr st = typeOfTerm(env, n.subject);
      return expectCompatible(ct, st, "monitored term");
    }
  };
  return std::visit(V{env}, e->node);
}

TypePtr typeOfContract(TypeEnv& env, const ContractPtr& c) {
  if (auto* p = std::get_if<Pred>(&c->node)) {  // T-Pred
    return typeOfPredParts(env, p->sigma, p->body);
  }
  const auto& f = std::get<Contract::DepFun>(c->node);  // T-Fun
  TypePtr dt = typeOfContract(env, f.dom);
  env.push(f.param, dt);
  TypePtr ct;
  try {
    ct = typeOfContract(env, f.cod);
  } catch (...) {
    env.pop();
    throw;
  }
  env.pop();
  return tArrow(dt, ct);
}

TypePtr typeOfLabeled(TypeEnv& env, const LabeledPtr& c) {
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {  // T-CNil / T-CPred
    TypePtr declared = tBase(s->base);
    for (const auto& p : s->preds) {
      TypePtr pt = typeOfPredParts(env, p.sigma, p.body);
      if (!typeEq(pt, declared)) {
        fail(TypeErrorKind::Mismatch,
             "heterogeneous predicate stack: entry at " + showType(pt) +
                 " in a stack at " + showType(declared));
      }
    }
    return declared;
  }
  const auto& f = std::get<LabeledContract::DepFun>(c->node);  // T-CFun
  TypePtr dt = typeOfLabeled(env, f.dom);
  env.push(f.param, dt);
  TypePtr ct;
  try {
    ct = typeOfLabeled(env, f.cod);
  } catch (...) {
    env.pop();
    throw;
  }
  env.pop();
  return tArrow(dt, ct);
}

TypePtr typeOfTerm(const TermPtr& e) {
  TypeEnv env;
  return typeOfTerm(env, e);
}
TypePtr typeOfContract(const ContractPtr& c) {
  TypeEnv env;
  return typeOfContract(env, c);
}

}  // namespace cpcf

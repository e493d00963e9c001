#include "cpcf/ast.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cpcf {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

TypePtr tBase(BaseType b) { return std::make_shared<Type>(Type{Type::Base{b}}); }
TypePtr tInt() {
  static const TypePtr t = tBase(BaseType::Int);
  return t;
}
TypePtr tBool() {
  static const TypePtr t = tBase(BaseType::Bool);
  return t;
}
TypePtr tArrow(TypePtr dom, TypePtr cod) {
  return std::make_shared<Type>(Type{Type::Arrow{std::move(dom), std::move(cod)}});
}
TypePtr tAny() {
  static const TypePtr t = std::make_shared<Type>(Type{Type::Any{}});
  return t;
}

bool typeEq(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* ba = std::get_if<Type::Base>(&a->node)) {
    return ba->base == std::get<Type::Base>(b->node).base;
  }
  if (auto* ar = std::get_if<Type::Arrow>(&a->node)) {
    const auto& br = std::get<Type::Arrow>(b->node);
    return typeEq(ar->dom, br.dom) && typeEq(ar->cod, br.cod);
  }
  return true;  // Any == Any
}

bool typesCompatible(const TypePtr& a, const TypePtr& b) {
  return typeMeet(a, b) != nullptr;
}

TypePtr typeMeet(const TypePtr& a, const TypePtr& b) {
  if (std::holds_alternative<Type::Any>(a->node)) return b;
  if (std::holds_alternative<Type::Any>(b->node)) return a;
  if (a->node.index() != b->node.index()) return nullptr;
  if (auto* ba = std::get_if<Type::Base>(&a->node)) {
    return ba->base == std::get<Type::Base>(b->node).base ? a : nullptr;
  }
  const auto& ar = std::get<Type::Arrow>(a->node);
  const auto& br = std::get<Type::Arrow>(b->node);
  TypePtr d = typeMeet(ar.dom, br.dom);
  TypePtr c = typeMeet(ar.cod, br.cod);
  if (!d || !c) return nullptr;
  return tArrow(d, c);
}

OpSig opSignature(OpTag op) {
  switch (op) {
    case OpTag::Add:
    case OpTag::Sub:
    case OpTag::Mul:
    case OpTag::Mod:
      return {BaseType::Int, BaseType::Int, BaseType::Int};
    case OpTag::Eq:
    case OpTag::Lt:
    case OpTag::Le:
    case OpTag::Gt:
    case OpTag::Ge:
      return {BaseType::Int, BaseType::Int, BaseType::Bool};
    case OpTag::Or:
    case OpTag::And:
      return {BaseType::Bool, BaseType::Bool, BaseType::Bool};
  }
  return {BaseType::Int, BaseType::Int, BaseType::Int};  // unreachable
}

const char* opSymbol(OpTag op) {
  switch (op) {
    case OpTag::Add: return "+";
    case OpTag::Sub: return "-";
    case OpTag::Mul: return "*";
    case OpTag::Mod: return "mod";
    case OpTag::Eq: return "=";
    case OpTag::Lt: return "<";
    case OpTag::Le: return "<=";
    case OpTag::Gt: return ">";
    case OpTag::Ge: return ">=";
    case OpTag::Or: return "or";
    case OpTag::And: return "and";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

const TermPtr* sigmaLookup(const ClosingSubstitution& sigma,
                           const std::string& name) {
  for (const auto& [k, v] : sigma) {
    if (k == name) return &v;
  }
  return nullptr;
}

TermPtr mkVar(std::string name) {
  return std::make_shared<Term>(Term{Term::Var{std::move(name)}});
}
TermPtr mkInt(Int v) {
  return std::make_shared<Term>(Term{Term::ConstInt{std::move(v)}});
}
TermPtr mkBool(bool v) { return std::make_shared<Term>(Term{Term::ConstBool{v}}); }
TermPtr mkOp(OpTag op, TermPtr l, TermPtr r) {
  return std::make_shared<Term>(Term{Term::Op{op, std::move(l), std::move(r)}});
}
TermPtr mkApp(TermPtr f, TermPtr a) {
  return std::make_shared<Term>(Term{Term::App{std::move(f), std::move(a)}});
}
TermPtr mkAbs(std::string param, TypePtr ty, TermPtr body) {
  return std::make_shared<Term>(
      Term{Term::Abs{std::move(param), std::move(ty), std::move(body)}});
}
TermPtr mkFix(std::string param, TypePtr ty, TermPtr body) {
  return std::make_shared<Term>(
      Term{Term::Fix{std::move(param), std::move(ty), std::move(body)}});
}
TermPtr mkIf(TermPtr c, TermPtr t, TermPtr e) {
  return std::make_shared<Term>(
      Term{Term::If{std::move(c), std::move(t), std::move(e)}});
}
TermPtr mkErr(std::string label) {
  return std::make_shared<Term>(Term{Term::Err{std::move(label)}});
}
TermPtr mkMonC(std::string label, ContractPtr c, TermPtr subject) {
  return std::make_shared<Term>(
      Term{Term::MonC{std::move(label), std::move(c), std::move(subject)}});
}
TermPtr mkMonE(LabeledPtr c, TermPtr subject) {
  return std::make_shared<Term>(
      Term{Term::MonE{std::move(c), std::move(subject)}});
}

ContractPtr mkPred(std::optional<std::string> name, ClosingSubstitution sigma,
                   TermPtr body) {
  return std::make_shared<Contract>(
      Contract{Pred{std::move(name), std::move(sigma), std::move(body)}});
}
ContractPtr mkDepFun(std::string param, ContractPtr dom, ContractPtr cod) {
  return std::make_shared<Contract>(Contract{
      Contract::DepFun{std::move(param), std::move(dom), std::move(cod)}});
}
LabeledPtr mkStack(BaseType base, std::vector<LabeledPred> preds) {
  return std::make_shared<LabeledContract>(
      LabeledContract{PredicateStack{base, std::move(preds)}});
}
LabeledPtr mkLDepFun(std::string param, LabeledPtr dom, LabeledPtr cod) {
  return std::make_shared<LabeledContract>(LabeledContract{
      LabeledContract::DepFun{std::move(param), std::move(dom), std::move(cod)}});
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

namespace {

void fvTerm(const TermPtr& e, std::set<std::string>& bound,
            std::set<std::string>& out);
void fvContract(const ContractPtr& c, std::set<std::string>& bound,
                std::set<std::string>& out);
void fvLabeled(const LabeledPtr& c, std::set<std::string>& bound,
               std::set<std::string>& out);

void fvSigmaPred(const ClosingSubstitution& sigma, const TermPtr& body,
                 std::set<std::string>& bound, std::set<std::string>& out) {
  // fv of the sigma-applied body: body's free vars not covered by sigma, plus
  // the free vars of every range entry that is actually used (the invariant
  // says sigma only tracks variables appearing in the body, so all entries).
  std::set<std::string> bodyFv;
  std::set<std::string> none;
  fvTerm(body, none, bodyFv);
  for (const auto& v : bodyFv) {
    if (!sigmaLookup(sigma, v) && !bound.count(v)) out.insert(v);
  }
  for (const auto& [k, t] : sigma) {
    (void)k;
    fvTerm(t, bound, out);
  }
}

void fvTerm(const TermPtr& e, std::set<std::string>& bound,
            std::set<std::string>& out) {
  struct V {
    std::set<std::string>& bound;
    std::set<std::string>& out;
    void operator()(const Term::Var& n) {
      if (!bound.count(n.name)) out.insert(n.name);
    }
    void operator()(const Term::ConstInt&) {}
    void operator()(const Term::ConstBool&) {}
    void operator()(const Term::Err&) {}
    void operator()(const Term::Op& n) {
      fvTerm(n.lhs, bound, out);
      fvTerm(n.rhs, bound, out);
    }
    void operator()(const Term::App& n) {
      fvTerm(n.fn, bound, out);
      fvTerm(n.arg, bound, out);
    }
    void operator()(const Term::Abs& n) {
      bool fresh = bound.insert(n.param).second;
      fvTerm(n.body, bound, out);
      if (fresh) bound.erase(n.param);
    }
    void operator()(const Term::Fix& n) {
      bool fresh = bound.insert(n.param).second;
      fvTerm(n.body, bound, out);
      if (fresh) bound.erase(n.param);
    }
    void operator()(const Term::If& n) {
      fvTerm(n.cond, bound, out);
      fvTerm(n.thenBranch, bound, out);
      fvTerm(n.elseBranch, bound, out);
    }
    void operator()(const Term::MonC& n) {
      fvContract(n.contract, bound, out);
      fvTerm(n.subject, bound, out);
    }
    void operator()(const Term::MonE& n) {
      fvLabeled(n.labeled, bound, out);
      fvTerm(n.subject, bound, out);
    }
  };
  std::visit(V{bound, out}, e->node);
}

void fvContract(const ContractPtr& c, std::set<std::string>& bound,
                std::set<std::string>& out) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    fvSigmaPred(p->sigma, p->body, bound, out);
  } else {
    const auto& f = std::get<Contract::DepFun>(c->node);
    fvContract(f.dom, bound, out);
    bool fresh = bound.insert(f.param).second;
    fvContract(f.cod, bound, out);
    if (fresh) bound.erase(f.param);
  }
}

void fvLabeled(const LabeledPtr& c, std::set<std::string>& bound,
               std::set<std::string>& out) {
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {
    for (const auto& p : s->preds) fvSigmaPred(p.sigma, p.body, bound, out);
  } else {
    const auto& f = std::get<LabeledContract::DepFun>(c->node);
    fvLabeled(f.dom, bound, out);
    bool fresh = bound.insert(f.param).second;
    fvLabeled(f.cod, bound, out);
    if (fresh) bound.erase(f.param);
  }
}

}  // namespace

std::set<std::string> freeVars(const TermPtr& e) {
  std::set<std::string> bound, out;
  fvTerm(e, bound, out);
  return out;
}
std::set<std::string> freeVarsContract(const ContractPtr& c) {
  std::set<std::string> bound, out;
  fvContract(c, bound, out);
  return out;
}
std::set<std::string> freeVarsLabeled(const LabeledPtr& c) {
  std::set<std::string> bound, out;
  fvLabeled(c, bound, out);
  return out;
}
std::set<std::string> freeVarsPred(const ClosingSubstitution& sigma,
                                   const TermPtr& body) {
  std::set<std::string> bound, out;
  fvSigmaPred(sigma, body, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical (nameless) printing and alpha equality
// ---------------------------------------------------------------------------

namespace {

// Environment mapping bound names to binder depth; free names print as-is.
struct CanonEnv {
  std::vector<std::string> binders;  // innermost last
  std::string lookup(const std::string& name) const {
    for (size_t i = binders.size(); i-- > 0;) {
      if (binders[i] == name) return "%" + std::to_string(binders.size() - i);
    }
    return name;
  }
};

void canonType(const TypePtr& t, std::ostringstream& os) {
  if (auto* b = std::get_if<Type::Base>(&t->node)) {
    os << (b->base == BaseType::Int ? "I" : "B");
  } else if (auto* a = std::get_if<Type::Arrow>(&t->node)) {
    os << '(';
    canonType(a->dom, os);
    os << "->";
    canonType(a->cod, os);
    os << ')';
  } else {
    os << '?';
  }
}

void canonTerm(const TermPtr& e, CanonEnv& env, std::ostringstream& os);
void canonContract(const ContractPtr& c, CanonEnv& env, std::ostringstream& os);
void canonLabeled(const LabeledPtr& c, CanonEnv& env, std::ostringstream& os);

void canonSigmaPred(const ClosingSubstitution& sigma, const TermPtr& body,
                    CanonEnv& env, std::ostringstream& os) {
  // Name-sorted sigma for order-insensitive comparison.
  std::map<std::string, const TermPtr*> sorted;
  for (const auto& [k, v] : sigma) sorted[k] = &v;
  os << "[";
  for (const auto& [k, v] : sorted) {
    os << k << ":=";
    canonTerm(*v, env, os);
    os << ',';
  }
  os << "]";
  // The body's sigma-bound variables print by name (they are semantically
  // bound by the sigma entries just printed, whose keys are printed).
  canonTerm(body, env, os);
}

void canonTerm(const TermPtr& e, CanonEnv& env, std::ostringstream& os) {
  struct V {
    CanonEnv& env;
    std::ostringstream& os;
    void operator()(const Term::Var& n) { os << 'v' << env.lookup(n.name); }
    void operator()(const Term::ConstInt& n) { os << 'i' << n.value; }
    void operator()(const Term::ConstBool& n) { os << (n.value ? "bt" : "bf"); }
    void operator()(const Term::Err& n) { os << "err^" << n.label; }
    void operator()(const Term::Op& n) {
      os << "op" << static_cast<int>(n.op) << '(';
      canonTerm(n.lhs, env, os);
      os << ',';
      canonTerm(n.rhs, env, os);
      os << ')';
    }
    void operator()(const Term::App& n) {
      os << "app(";
      canonTerm(n.fn, env, os);
      os << ',';
      canonTerm(n.arg, env, os);
      os << ')';
    }
    void operator()(const Term::Abs& n) {
      os << "lam:";
      canonType(n.paramType, os);
      os << '.';
      env.binders.push_back(n.param);
      canonTerm(n.body, env, os);
      env.binders.pop_back();
    }
    void operator()(const Term::Fix& n) {
      os << "mu:";
      canonType(n.paramType, os);
      os << '.';
      env.binders.push_back(n.param);
      canonTerm(n.body, env, os);
      env.binders.pop_back();
    }
    void operator()(const Term::If& n) {
      os << "if(";
      canonTerm(n.cond, env, os);
      os << ',';
      canonTerm(n.thenBranch, env, os);
      os << ',';
      canonTerm(n.elseBranch, env, os);
      os << ')';
    }
    void operator()(const Term::MonC& n) {
      os << "monc^" << n.label << '(';
      canonContract(n.contract, env, os);
      os << ',';
      canonTerm(n.subject, env, os);
      os << ')';
    }
    void operator()(const Term::MonE& n) {
      os << "mone(";
      canonLabeled(n.labeled, env, os);
      os << ',';
      canonTerm(n.subject, env, os);
      os << ')';
    }
  };
  std::visit(V{env, os}, e->node);
}

void canonContract(const ContractPtr& c, CanonEnv& env, std::ostringstream& os) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    os << "pred";
    canonSigmaPred(p->sigma, p->body, env, os);
  } else {
    const auto& f = std::get<Contract::DepFun>(c->node);
    os << "dep(";
    canonContract(f.dom, env, os);
    os << ',';
    env.binders.push_back(f.param);
    canonContract(f.cod, env, os);
    env.binders.pop_back();
    os << ')';
  }
}

void canonLabeled(const LabeledPtr& c, CanonEnv& env, std::ostringstream& os) {
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {
    os << "stack@" << (s->base == BaseType::Int ? "I" : "B") << '{';
    for (const auto& p : s->preds) {
      os << "p^" << p.label;
      canonSigmaPred(p.sigma, p.body, env, os);
      os << ';';
    }
    os << '}';
  } else {
    const auto& f = std::get<LabeledContract::DepFun>(c->node);
    os << "ldep(";
    canonLabeled(f.dom, env, os);
    os << ',';
    env.binders.push_back(f.param);
    canonLabeled(f.cod, env, os);
    env.binders.pop_back();
    os << ')';
  }
}

}  // namespace

std::string canonicalKey(const TermPtr& e) {
  std::ostringstream os;
  CanonEnv env;
  canonTerm(e, env, os);
  return os.str();
}

std::string canonicalKeyPred(const ClosingSubstitution& sigma,
                             const TermPtr& body) {
  std::ostringstream os;
  CanonEnv env;
  canonSigmaPred(sigma, body, env, os);
  return os.str();
}

bool alphaEq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  return canonicalKey(a) == canonicalKey(b);
}

bool alphaEqContract(const ContractPtr& a, const ContractPtr& b) {
  if (a == b) return true;
  std::ostringstream oa, ob;
  CanonEnv ea, eb;
  canonContract(a, ea, oa);
  canonContract(b, eb, ob);
  return oa.str() == ob.str();
}

bool alphaEqLabeled(const LabeledPtr& a, const LabeledPtr& b) {
  if (a == b) return true;
  std::ostringstream oa, ob;
  CanonEnv ea, eb;
  canonLabeled(a, ea, oa);
  canonLabeled(b, eb, ob);
  return oa.str() == ob.str();
}

bool sigmaEq(const ClosingSubstitution& a, const ClosingSubstitution& b) {
  if (a.size() != b.size()) return false;
  std::map<std::string, const TermPtr*> ma, mb;
  for (const auto& [k, v] : a) ma[k] = &v;
  for (const auto& [k, v] : b) mb[k] = &v;
  if (ma.size() != mb.size()) return false;
  for (const auto& [k, v] : ma) {
    auto it = mb.find(k);
    if (it == mb.end() || !alphaEq(*v, *it->second)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// isSourceProgram / isSimple
// ---------------------------------------------------------------------------

namespace {

template <typename TermFn, typename ContractFn, typename LabeledFn>
struct Walker {
  TermFn onTerm;          // bool(TermPtr): return false to abort walk
  ContractFn onContract;  // bool(Pred-or-DepFun seen via ContractPtr)
  LabeledFn onLabeled;

  bool term(const TermPtr& e) {
    if (!onTerm(e)) return false;
    struct V {
      Walker& w;
      bool operator()(const Term::Var&) { return true; }
      bool operator()(const Term::ConstInt&) { return true; }
      bool operator()(const Term::ConstBool&) { return true; }
      bool operator()(const Term::Err&) { return true; }
      bool operator()(const Term::Op& n) {
        return w.term(n.lhs) && w.term(n.rhs);
      }
      bool operator()(const Term::App& n) {
        return w.term(n.fn) && w.term(n.arg);
      }
      bool operator()(const Term::Abs& n) { return w.term(n.body); }
      bool operator()(const Term::Fix& n) { return w.term(n.body); }
      bool operator()(const Term::If& n) {
        return w.term(n.cond) && w.term(n.thenBranch) && w.term(n.elseBranch);
      }
      bool operator()(const Term::MonC& n) {
        return w.contract(n.contract) && w.term(n.subject);
      }
      bool operator()(const Term::MonE& n) {
        return w.labeled(n.labeled) && w.term(n.subject);
      }
    };
    return std::visit(V{*this}, e->node);
  }

  bool contract(const ContractPtr& c) {
    if (!onContract(c)) return false;
    if (auto* p = std::get_if<Pred>(&c->node)) {
      for (const auto& [k, v] : p->sigma) {
        (void)k;
        if (!term(v)) return false;
      }
      return term(p->body);
    }
    const auto& f = std::get<Contract::DepFun>(c->node);
    return contract(f.dom) && contract(f.cod);
  }

  bool labeled(const LabeledPtr& c) {
    if (!onLabeled(c)) return false;
    if (auto* s = std::get_if<PredicateStack>(&c->node)) {
      for (const auto& p : s->preds) {
        for (const auto& [k, v] : p.sigma) {
          (void)k;
          if (!term(v)) return false;
        }
        if (!term(p.body)) return false;
      }
      return true;
    }
    const auto& f = std::get<LabeledContract::DepFun>(c->node);
    return labeled(f.dom) && labeled(f.cod);
  }
};

}  // namespace

bool isSourceProgram(const TermPtr& e) {
  auto onTerm = [](const TermPtr& t) {
    return !std::holds_alternative<Term::Err>(t->node) &&
           !std::holds_alternative<Term::MonE>(t->node);
  };
  auto pass = [](const auto&) { return true; };
  Walker<decltype(onTerm), decltype(pass), decltype(pass)> w{onTerm, pass, pass};
  return w.term(e);
}

bool isSimple(const TermPtr& e, const ImpliesFn& implies) {
  auto simplePred = [](const ClosingSubstitution& sigma, const TermPtr& body) {
    return sigma.empty() && freeVarsPred(sigma, body).empty();
  };
  auto onTerm = [](const TermPtr&) { return true; };
  auto onContract = [&](const ContractPtr& c) {
    if (auto* p = std::get_if<Pred>(&c->node)) {
      return simplePred(p->sigma, p->body);
    }
    return true;
  };
  auto onLabeled = [&](const LabeledPtr& c) {
    if (auto* s = std::get_if<PredicateStack>(&c->node)) {
      for (const auto& p : s->preds) {
        if (!simplePred(p.sigma, p.body)) return false;
      }
      // Redundancy-freedom: no entry implies another distinct entry.
      for (size_t i = 0; i < s->preds.size(); ++i) {
        for (size_t j = 0; j < s->preds.size(); ++j) {
          if (i == j) continue;
          const auto& a = s->preds[i];
          const auto& b = s->preds[j];
          if (implies(a.predName, a.sigma, a.body, b.predName, b.sigma,
                      b.body)) {
            return false;
          }
        }
      }
    }
    return true;
  };
  Walker<decltype(onTerm), decltype(onContract), decltype(onLabeled)> w{
      onTerm, onContract, onLabeled};
  return w.term(e);
}

}  // namespace cpcf

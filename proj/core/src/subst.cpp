#include "cpcf/subst.hpp"

#include <atomic>

namespace cpcf {

namespace {
thread_local unsigned long freshCounter = 0;
thread_local int evalDepth = 0;
}

FreshNameScope::FreshNameScope() {
  if (evalDepth++ == 0) resetFreshNames();
}
FreshNameScope::~FreshNameScope() { --evalDepth; }

std::string freshName(const std::string& base) {
  // Strip any existing $n suffix so renames stay readable (x$1 -> x$2, not
  // x$1$2).
  std::string stem = base;
  if (auto pos = stem.rfind('$'); pos != std::string::npos) {
    stem = stem.substr(0, pos);
  }
  return stem + "$" + std::to_string(++freshCounter);
}

void resetFreshNames() { freshCounter = 0; }

// ---------------------------------------------------------------------------
// Renaming (alpha conversion)
// ---------------------------------------------------------------------------

namespace {

TermPtr renameTerm(const TermPtr& e, const std::string& x, const std::string& y);
ContractPtr renameContract(const ContractPtr& c, const std::string& x,
                           const std::string& y);
LabeledPtr renameLabeled(const LabeledPtr& c, const std::string& x,
                         const std::string& y);

ClosingSubstitution renameSigmaRange(const ClosingSubstitution& sigma,
                                     const std::string& x,
                                     const std::string& y, bool& changed) {
  ClosingSubstitution out;
  out.reserve(sigma.size());
  for (const auto& [k, v] : sigma) {
    TermPtr nv = renameTerm(v, x, y);
    if (nv != v) changed = true;
    out.emplace_back(k, std::move(nv));
  }
  return out;
}

TermPtr renameTerm(const TermPtr& e, const std::string& x,
                   const std::string& y) {
  struct V {
    const TermPtr& e;
    const std::string& x;
    const std::string& y;
    TermPtr operator()(const Term::Var& n) {
      return n.name == x ? mkVar(y) : e;
    }
    TermPtr operator()(const Term::ConstInt&) { return e; }
    TermPtr operator()(const Term::ConstBool&) { return e; }
    TermPtr operator()(const Term::Err&) { return e; }
    TermPtr operator()(const Term::Op& n) {
      TermPtr l = renameTerm(n.lhs, x, y), r = renameTerm(n.rhs, x, y);
      return (l == n.lhs && r == n.rhs) ? e : mkOp(n.op, l, r);
    }
    TermPtr operator()(const Term::App& n) {
      TermPtr f = renameTerm(n.fn, x, y), a = renameTerm(n.arg, x, y);
      return (f == n.fn && a == n.arg) ? e : mkApp(f, a);
    }
    TermPtr operator()(const Term::Abs& n) {
      if (n.param == x) return e;
      TermPtr b = renameTerm(n.body, x, y);
      return b == n.body ? e : mkAbs(n.param, n.paramType, b);
    }
    TermPtr operator()(const Term::Fix& n) {
      if (n.param == x) return e;
      TermPtr b = renameTerm(n.body, x, y);
      return b == n.body ? e : mkFix(n.param, n.paramType, b);
    }
    TermPtr operator()(const Term::If& n) {
      TermPtr c = renameTerm(n.cond, x, y), t = renameTerm(n.thenBranch, x, y),
              el = renameTerm(n.elseBranch, x, y);
      return (c == n.cond && t == n.thenBranch && el == n.elseBranch)
                 ? e
                 : mkIf(c, t, el);
    }
    TermPtr operator()(const Term::MonC& n) {
      ContractPtr c = renameContract(n.contract, x, y);
      TermPtr s = renameTerm(n.subject, x, y);
      return (c == n.contract && s == n.subject) ? e : mkMonC(n.label, c, s);
    }
    TermPtr operator()(const Term::MonE& n) {
      LabeledPtr c = renameLabeled(n.labeled, x, y);
      TermPtr s = renameTerm(n.subject, x, y);
      return (c == n.labeled && s == n.subject) ? e : mkMonE(c, s);
    }
  };
  return std::visit(V{e, x, y}, e->node);
}

ContractPtr renameContract(const ContractPtr& c, const std::string& x,
                           const std::string& y) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    bool changed = false;
    ClosingSubstitution sigma = renameSigmaRange(p->sigma, x, y, changed);
    TermPtr body = p->body;
    // Body occurrences of x are free only when sigma does not bind x.
    if (!sigmaLookup(p->sigma, x)) {
      TermPtr nb = renameTerm(body, x, y);
      if (nb != body) {
        body = nb;
        changed = true;
      }
    }
    return changed ? mkPred(p->predName, std::move(sigma), body) : c;
  }
  const auto& f = std::get<Contract::DepFun>(c->node);
  ContractPtr dom = renameContract(f.dom, x, y);
  ContractPtr cod = f.param == x ? f.cod : renameContract(f.cod, x, y);
  return (dom == f.dom && cod == f.cod) ? c : mkDepFun(f.param, dom, cod);
}

LabeledPtr renameLabeled(const LabeledPtr& c, const std::string& x,
                         const std::string& y) {
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {
    bool changed = false;
    std::vector<LabeledPred> preds;
    preds.reserve(s->preds.size());
    for (const auto& p : s->preds) {
      bool pc = false;
      ClosingSubstitution sigma = renameSigmaRange(p.sigma, x, y, pc);
      TermPtr body = p.body;
      if (!sigmaLookup(p.sigma, x)) {
        TermPtr nb = renameTerm(body, x, y);
        if (nb != body) {
          body = nb;
          pc = true;
        }
      }
      changed = changed || pc;
      preds.push_back(LabeledPred{p.label, p.predName, std::move(sigma), body});
    }
    return changed ? mkStack(s->base, std::move(preds)) : c;
  }
  const auto& f = std::get<LabeledContract::DepFun>(c->node);
  LabeledPtr dom = renameLabeled(f.dom, x, y);
  LabeledPtr cod = f.param == x ? f.cod : renameLabeled(f.cod, x, y);
  return (dom == f.dom && cod == f.cod) ? c : mkLDepFun(f.param, dom, cod);
}

}  // namespace

LabeledPtr renameVarLabeled(const LabeledPtr& c, const std::string& x,
                            const std::string& y) {
  return renameLabeled(c, x, y);
}

// ---------------------------------------------------------------------------
// Simultaneous substitution
// ---------------------------------------------------------------------------

namespace {

bool mapTouches(const SubstMap& m, const std::set<std::string>& fv) {
  for (const auto& [k, v] : m) {
    (void)v;
    if (fv.count(k)) return true;
  }
  return false;
}

ContractPtr substContractMulti(const ContractPtr& c, const SubstMap& m);
LabeledPtr substLabeledMulti(const LabeledPtr& c, const SubstMap& m);

// Binder handling shared by Abs/Fix/DepFun: remove the bound name from the
// map; rename the binder if it would capture a free variable of the map's
// range.
struct BinderScope {
  SubstMap inner;
  std::string param;
  bool renamed = false;

  BinderScope(const SubstMap& m, const std::string& p) : param(p) {
    for (const auto& [k, v] : m) {
      if (k != p) inner.emplace(k, v);
    }
    bool capture = false;
    for (const auto& [k, v] : inner) {
      (void)k;
      if (freeVars(v).count(param)) {
        capture = true;
        break;
      }
    }
    if (capture && !inner.empty()) {
      param = freshName(p);
      renamed = true;
    }
  }
};

std::pair<ClosingSubstitution, bool> substSigmaMulti(
    const ClosingSubstitution& sigma, const TermPtr& body, const SubstMap& m) {
  std::set<std::string> fvP = freeVarsPred(sigma, body);
  if (!mapTouches(m, fvP)) return {sigma, false};
  ClosingSubstitution out;
  out.reserve(sigma.size());
  for (const auto& [k, v] : sigma) {
    out.emplace_back(k, substTermMulti(v, m));
  }
  // Extend with entries for map variables still free in the body and unbound
  // by sigma ("we don't track variables that don't appear in the predicate").
  std::set<std::string> bodyFv = freeVars(body);
  for (const auto& [x, v] : m) {
    if (bodyFv.count(x) && !sigmaLookup(sigma, x)) {
      out.emplace_back(x, v);
    }
  }
  return {std::move(out), true};
}

ContractPtr substContractMulti(const ContractPtr& c, const SubstMap& m) {
  if (m.empty()) return c;
  if (auto* p = std::get_if<Pred>(&c->node)) {
    auto [sigma, changed] = substSigmaMulti(p->sigma, p->body, m);
    return changed ? mkPred(p->predName, std::move(sigma), p->body) : c;
  }
  const auto& f = std::get<Contract::DepFun>(c->node);
  ContractPtr dom = substContractMulti(f.dom, m);
  BinderScope bs(m, f.param);
  ContractPtr cod = bs.renamed ? renameContract(f.cod, f.param, bs.param) : f.cod;
  cod = substContractMulti(cod, bs.inner);
  return (dom == f.dom && cod == f.cod && !bs.renamed)
             ? c
             : mkDepFun(bs.param, dom, cod);
}

LabeledPtr substLabeledMulti(const LabeledPtr& c, const SubstMap& m) {
  if (m.empty()) return c;
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {
    bool changed = false;
    std::vector<LabeledPred> preds;
    preds.reserve(s->preds.size());
    // (pred^l_sigma(e);r)[v/x] = pred^l_sigma(e)[v/x] ; r[v/x] — no joining.
    for (const auto& p : s->preds) {
      auto [sigma, pc] = substSigmaMulti(p.sigma, p.body, m);
      changed = changed || pc;
      preds.push_back(LabeledPred{p.label, p.predName, std::move(sigma), p.body});
    }
    return changed ? mkStack(s->base, std::move(preds)) : c;
  }
  const auto& f = std::get<LabeledContract::DepFun>(c->node);
  LabeledPtr dom = substLabeledMulti(f.dom, m);
  BinderScope bs(m, f.param);
  LabeledPtr cod = bs.renamed ? renameLabeled(f.cod, f.param, bs.param) : f.cod;
  cod = substLabeledMulti(cod, bs.inner);
  return (dom == f.dom && cod == f.cod && !bs.renamed)
             ? c
             : mkLDepFun(bs.param, dom, cod);
}

}  // namespace

TermPtr substTermMulti(const TermPtr& e, const SubstMap& m) {
  if (m.empty()) return e;
  struct V {
    const TermPtr& e;
    const SubstMap& m;
    TermPtr operator()(const Term::Var& n) {
      auto it = m.find(n.name);
      return it == m.end() ? e : it->second;
    }
    TermPtr operator()(const Term::ConstInt&) { return e; }
    TermPtr operator()(const Term::ConstBool&) { return e; }
    TermPtr operator()(const Term::Err&) { return e; }
    TermPtr operator()(const Term::Op& n) {
      TermPtr l = substTermMulti(n.lhs, m), r = substTermMulti(n.rhs, m);
      return (l == n.lhs && r == n.rhs) ? e : mkOp(n.op, l, r);
    }
    TermPtr operator()(const Term::App& n) {
      TermPtr f = substTermMulti(n.fn, m), a = substTermMulti(n.arg, m);
      return (f == n.fn && a == n.arg) ? e : mkApp(f, a);
    }
    TermPtr operator()(const Term::Abs& n) {
      BinderScope bs(m, n.param);
      TermPtr body =
          bs.renamed ? renameTerm(n.body, n.param, bs.param) : n.body;
      body = substTermMulti(body, bs.inner);
      return (body == n.body && !bs.renamed)
                 ? e
                 : mkAbs(bs.param, n.paramType, body);
    }
    TermPtr operator()(const Term::Fix& n) {
      BinderScope bs(m, n.param);
      TermPtr body =
          bs.renamed ? renameTerm(n.body, n.param, bs.param) : n.body;
      body = substTermMulti(body, bs.inner);
      return (body == n.body && !bs.renamed)
                 ? e
                 : mkFix(bs.param, n.paramType, body);
    }
    TermPtr operator()(const Term::If& n) {
      TermPtr c = substTermMulti(n.cond, m),
              t = substTermMulti(n.thenBranch, m),
              el = substTermMulti(n.elseBranch, m);
      return (c == n.cond && t == n.thenBranch && el == n.elseBranch)
                 ? e
                 : mkIf(c, t, el);
    }
    TermPtr operator()(const Term::MonC& n) {
      ContractPtr c = substContractMulti(n.contract, m);
      TermPtr s = substTermMulti(n.subject, m);
      return (c == n.contract && s == n.subject) ? e : mkMonC(n.label, c, s);
    }
    TermPtr operator()(const Term::MonE& n) {
      LabeledPtr c = substLabeledMulti(n.labeled, m);
      TermPtr s = substTermMulti(n.subject, m);
      return (c == n.labeled && s == n.subject) ? e : mkMonE(c, s);
    }
  };
  return std::visit(V{e, m}, e->node);
}

TermPtr substTerm(const TermPtr& e, const std::string& x, const TermPtr& v) {
  SubstMap m;
  m.emplace(x, v);
  return substTermMulti(e, m);
}

std::pair<ClosingSubstitution, bool> substSigma(const ClosingSubstitution& sigma,
                                                const TermPtr& body,
                                                const std::string& x,
                                                const TermPtr& v) {
  SubstMap m;
  m.emplace(x, v);
  return substSigmaMulti(sigma, body, m);
}

ContractPtr substContract(const ContractPtr& c, const std::string& x,
                          const TermPtr& v) {
  SubstMap m;
  m.emplace(x, v);
  return substContractMulti(c, m);
}

LabeledPtr substLabeled(const LabeledPtr& c, const std::string& x,
                        const TermPtr& v) {
  SubstMap m;
  m.emplace(x, v);
  return substLabeledMulti(c, m);
}

TermPtr applyClosing(const ClosingSubstitution& sigma, const TermPtr& e) {
  if (sigma.empty()) return e;
  SubstMap m;
  for (const auto& [k, v] : sigma) m.emplace(k, v);
  return substTermMulti(e, m);
}

}  // namespace cpcf

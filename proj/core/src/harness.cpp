#include "cpcf/harness.hpp"

#include <functional>
#include <random>

#include "cpcf/eval_classic.hpp"
#include "cpcf/surface.hpp"
#include "cpcf/types.hpp"

namespace cpcf {

namespace {

Pred poolPred(const std::string& name, const std::string& var, TypePtr ty,
              TermPtr body) {
  return Pred{name, {}, mkAbs(var, std::move(ty), std::move(body))};
}

}  // namespace

GenConfig defaultGenConfig() {
  GenConfig cfg;
  auto x = mkVar("x");
  cfg.predicatePool[BaseType::Int] = {
      poolPred("pos", "x", tInt(), mkOp(OpTag::Gt, x, mkInt(0))),
      poolPred("nonneg", "x", tInt(), mkOp(OpTag::Ge, x, mkInt(0))),
      poolPred("lt10", "x", tInt(), mkOp(OpTag::Lt, x, mkInt(10))),
      poolPred("even", "x", tInt(),
               mkOp(OpTag::Eq, mkOp(OpTag::Mod, x, mkInt(2)), mkInt(0))),
  };
  auto b = mkVar("b");
  cfg.predicatePool[BaseType::Bool] = {
      poolPred("bid", "b", tBool(), b),
      poolPred("btrue", "b", tBool(), mkBool(true)),
  };
  return cfg;
}

namespace {

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Generator {
 public:
  Generator(const GenConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

  TermPtr genBase(BaseType b, int depth) {
    if (depth <= 0) return leaf(b);
    switch (pick(7)) {
      case 0:
        return leaf(b);
      case 1:
        return genOp(b, depth);
      case 2:
        return mkIf(genBase(BaseType::Bool, depth - 1), genBase(b, depth - 1),
                    genBase(b, depth - 1));
      case 3:
        return genLet(b, depth);
      case 4:
        return genPredMon(b, depth);
      case 5:
        return genFunMonApp(b, depth);
      default:
        if (b == BaseType::Int) return genLoop(depth);
        return genOp(b, depth);
    }
  }

 private:
  const GenConfig& cfg_;
  std::mt19937_64 rng_;
  int labelCounter_ = 0;
  int varCounter_ = 0;
  std::vector<std::pair<std::string, BaseType>> env_;

  long pick(long n) { return static_cast<long>(rng_() % n); }
  Int smallInt() { return Int(pick(21) - 10); }
  std::string freshLabel() { return "g" + std::to_string(++labelCounter_); }
  std::string freshVar() { return "v" + std::to_string(++varCounter_); }

  TermPtr leaf(BaseType b) {
    std::vector<std::string> vars;
    for (const auto& [name, ty] : env_) {
      if (ty == b) vars.push_back(name);
    }
    if (!vars.empty() && pick(2) == 0) return mkVar(vars[pick(vars.size())]);
    if (b == BaseType::Int) return mkInt(smallInt());
    return mkBool(pick(2) == 0);
  }

  TermPtr genOp(BaseType b, int depth) {
    if (b == BaseType::Int) {
      static const OpTag ops[] = {OpTag::Add, OpTag::Sub, OpTag::Mul,
                                  OpTag::Add, OpTag::Mod};
      return mkOp(ops[pick(5)], genBase(BaseType::Int, depth - 1),
                  genBase(BaseType::Int, depth - 1));
    }
    switch (pick(4)) {
      case 0: {
        static const OpTag cmps[] = {OpTag::Eq, OpTag::Lt, OpTag::Le,
                                     OpTag::Gt, OpTag::Ge};
        return mkOp(cmps[pick(5)], genBase(BaseType::Int, depth - 1),
                    genBase(BaseType::Int, depth - 1));
      }
      case 1:
        return mkOp(OpTag::And, genBase(BaseType::Bool, depth - 1),
                    genBase(BaseType::Bool, depth - 1));
      case 2:
        return mkOp(OpTag::Or, genBase(BaseType::Bool, depth - 1),
                    genBase(BaseType::Bool, depth - 1));
      default:
        return mkOp(OpTag::Eq, genBase(BaseType::Bool, depth - 1),
                    genBase(BaseType::Bool, depth - 1));
    }
  }

  TermPtr genLet(BaseType b, int depth) {
    BaseType bound = pick(2) == 0 ? BaseType::Int : BaseType::Bool;
    TermPtr rhs = genBase(bound, depth - 1);
    std::string x = freshVar();
    env_.emplace_back(x, bound);
    TermPtr body = genBase(b, depth - 1);
    env_.pop_back();
    return mkApp(mkAbs(x, tBase(bound), body), rhs);
  }

  const Pred* samplePool(BaseType b) {
    auto it = cfg_.predicatePool.find(b);
    if (it == cfg_.predicatePool.end() || it->second.empty()) return nullptr;
    return &it->second[pick(it->second.size())];
  }

  TermPtr genPredMon(BaseType b, int depth) {
    const Pred* p = samplePool(b);
    if (!p) return leaf(b);
    return mkMonC(freshLabel(), mkPred(p->predName, p->sigma, p->body),
                  genBase(b, depth - 1));
  }

  TermPtr genFunMonApp(BaseType b, int depth) {
    BaseType domB = pick(2) == 0 ? BaseType::Int : BaseType::Bool;
    const Pred* domP = samplePool(domB);
    const Pred* codP = samplePool(b);
    if (!domP || !codP) return leaf(b);
    std::string x = freshVar();
    env_.emplace_back(x, domB);
    TermPtr body = genBase(b, depth - 1);
    env_.pop_back();
    TermPtr fn = mkAbs(x, tBase(domB), body);

    ContractPtr cod;
    if (cfg_.dependentContracts && b == BaseType::Int &&
        domB == BaseType::Int && pick(2) == 0) {
      // A codomain predicate mentioning the contract binder.
      std::string y = freshVar();
      OpTag rel = pick(2) == 0 ? OpTag::Ge : OpTag::Le;
      cod = mkPred(std::nullopt, {},
                   mkAbs(y, tInt(), mkOp(rel, mkVar(x), mkVar(y))));
    } else {
      cod = mkPred(codP->predName, codP->sigma, codP->body);
    }
    ContractPtr contract =
        mkDepFun(x, mkPred(domP->predName, domP->sigma, domP->body), cod);
    return mkApp(mkMonC(freshLabel(), contract, fn),
                 genBase(domB, depth - 1));
  }

  // A terminating countdown loop, optionally behind a function contract.
  TermPtr genLoop(int depth) {
    std::string f = freshVar();
    std::string n = freshVar();
    Int start = Int(pick(std::max(1, cfg_.recursionBudget)) + 1);
    TermPtr fnBody = mkIf(
        mkOp(OpTag::Le, mkVar(n), mkInt(0)), mkInt(0),
        mkOp(OpTag::Add, mkApp(mkVar(f), mkOp(OpTag::Sub, mkVar(n), mkInt(1))),
             mkInt(1)));
    TermPtr loop = mkFix(f, tArrow(tInt(), tInt()),
                         mkAbs(n, tInt(), fnBody));
    const Pred* domP = samplePool(BaseType::Int);
    if (domP && pick(2) == 0) {
      const Pred* codP = samplePool(BaseType::Int);
      ContractPtr contract = mkDepFun(
          freshVar(), mkPred(domP->predName, domP->sigma, domP->body),
          mkPred(codP->predName, codP->sigma, codP->body));
      loop = mkMonC(freshLabel(), contract, loop);
    }
    return mkApp(loop, mkInt(start));
  }
};

bool validProgram(const TermPtr& e) {
  if (!freeVars(e).empty() || !isSourceProgram(e)) return false;
  try {
    TypePtr t = typeOfTerm(e);
    return std::holds_alternative<Type::Base>(t->node);
  } catch (const TypeError&) {
    return false;
  }
}

}  // namespace

TermPtr genProgram(const GenConfig& cfg, std::uint64_t trial) {
  std::uint64_t seed = mixSeed(cfg.seed, trial);
  for (int depth = cfg.maxDepth; depth >= 0; --depth) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Generator gen(cfg, mixSeed(seed, attempt + 101 * depth));
      BaseType target =
          (seed + attempt) % 2 == 0 ? BaseType::Int : BaseType::Bool;
      TermPtr e = gen.genBase(target, depth);
      if (validProgram(e)) return e;
    }
  }
  return mkInt(0);
}

TermPtr genProgram(const GenConfig& cfg) { return genProgram(cfg, 0); }

LabeledPtr genLabeledBaseContract(const GenConfig& cfg, std::uint64_t trial,
                                  BaseType b) {
  std::mt19937_64 rng(mixSeed(cfg.seed ^ 0xc0ffeeull, trial));
  auto it = cfg.predicatePool.find(b);
  std::vector<LabeledPred> entries;
  if (it != cfg.predicatePool.end() && !it->second.empty()) {
    long len = static_cast<long>(rng() % 4);
    for (long i = 0; i < len; ++i) {
      const Pred& p = it->second[rng() % it->second.size()];
      entries.push_back(LabeledPred{"k" + std::to_string(i + 1), p.predName,
                                    p.sigma, p.body});
    }
  }
  return mkStack(b, std::move(entries));
}

bool outcomesAgree(const Outcome& a, const Outcome& b) {
  if (a.kind == Outcome::Kind::OutOfFuel || b.kind == Outcome::Kind::OutOfFuel) {
    return true;  // inconclusive, never a disagreement
  }
  if (a.kind != b.kind) return false;
  if (a.kind == Outcome::Kind::Value) return alphaEq(a.value, b.value);
  return a.label == b.label;
}

namespace {

long termSize(const TermPtr& e) {
  struct V {
    long operator()(const Term::Var&) { return 1; }
    long operator()(const Term::ConstInt&) { return 1; }
    long operator()(const Term::ConstBool&) { return 1; }
    long operator()(const Term::Err&) { return 1; }
    long operator()(const Term::Op& n) {
      return 1 + termSize(n.lhs) + termSize(n.rhs);
    }
    long operator()(const Term::App& n) {
      return 1 + termSize(n.fn) + termSize(n.arg);
    }
    long operator()(const Term::Abs& n) { return 1 + termSize(n.body); }
    long operator()(const Term::Fix& n) { return 1 + termSize(n.body); }
    long operator()(const Term::If& n) {
      return 1 + termSize(n.cond) + termSize(n.thenBranch) +
             termSize(n.elseBranch);
    }
    long operator()(const Term::MonC& n) { return 2 + termSize(n.subject); }
    long operator()(const Term::MonE& n) { return 2 + termSize(n.subject); }
  };
  return std::visit(V{}, e->node);
}

// All variants of e with exactly one subterm replaced by a constant.
void shrinkVariants(const TermPtr& e,
                    const std::function<TermPtr(const TermPtr&)>& rebuild,
                    std::vector<TermPtr>& out) {
  for (const TermPtr& k :
       {mkInt(0), mkInt(1), TermPtr(mkBool(true)), TermPtr(mkBool(false))}) {
    if (!alphaEq(e, k)) out.push_back(rebuild(k));
  }
  auto descend = [&](const TermPtr& child, auto rebuildChild) {
    shrinkVariants(
        child,
        [&](const TermPtr& r) { return rebuild(rebuildChild(r)); }, out);
  };
  if (auto* n = std::get_if<Term::Op>(&e->node)) {
    descend(n->lhs, [n](const TermPtr& r) { return mkOp(n->op, r, n->rhs); });
    descend(n->rhs, [n](const TermPtr& r) { return mkOp(n->op, n->lhs, r); });
  } else if (auto* n = std::get_if<Term::App>(&e->node)) {
    descend(n->fn, [n](const TermPtr& r) { return mkApp(r, n->arg); });
    descend(n->arg, [n](const TermPtr& r) { return mkApp(n->fn, r); });
  } else if (auto* n = std::get_if<Term::Abs>(&e->node)) {
    descend(n->body, [n](const TermPtr& r) {
      return mkAbs(n->param, n->paramType, r);
    });
  } else if (auto* n = std::get_if<Term::Fix>(&e->node)) {
    descend(n->body, [n](const TermPtr& r) {
      return mkFix(n->param, n->paramType, r);
    });
  } else if (auto* n = std::get_if<Term::If>(&e->node)) {
    descend(n->cond, [n](const TermPtr& r) {
      return mkIf(r, n->thenBranch, n->elseBranch);
    });
    descend(n->thenBranch,
            [n](const TermPtr& r) { return mkIf(n->cond, r, n->elseBranch); });
    descend(n->elseBranch,
            [n](const TermPtr& r) { return mkIf(n->cond, n->thenBranch, r); });
  } else if (auto* n = std::get_if<Term::MonC>(&e->node)) {
    descend(n->subject, [n](const TermPtr& r) {
      return mkMonC(n->label, n->contract, r);
    });
  }
}

struct TrialResult {
  Outcome classic;
  Outcome efficient;
  bool disagree = false;
};

TrialResult runBoth(const TermPtr& e, const ImplicationEngine& engine,
                    long fuel) {
  TrialResult r{evalClassicOutcome(e, fuel), evalEffOutcome(e, engine, fuel)};
  r.disagree = r.classic.kind != Outcome::Kind::OutOfFuel &&
               r.efficient.kind != Outcome::Kind::OutOfFuel &&
               !outcomesAgree(r.classic, r.efficient);
  return r;
}

TermPtr shrinkDisagreement(TermPtr e, const ImplicationEngine& engine,
                           long fuel) {
  for (int pass = 0; pass < 16; ++pass) {
    std::vector<TermPtr> candidates;
    shrinkVariants(e, [](const TermPtr& r) { return r; }, candidates);
    TermPtr best;
    for (const TermPtr& cand : candidates) {
      if (!validProgram(cand)) continue;
      if (best && termSize(cand) >= termSize(best)) continue;
      if (termSize(cand) >= termSize(e)) continue;
      try {
        if (runBoth(cand, engine, fuel).disagree) best = cand;
      } catch (const RuleEvalError&) {
      }
    }
    if (!best) break;
    e = best;
  }
  return e;
}

}  // namespace

DiffReport diffTest(const GenConfig& cfg, long n,
                    const ImplicationEngine& engine) {
  DiffReport report;
  for (long trial = 0; trial < n; ++trial) {
    TermPtr e = genProgram(cfg, static_cast<std::uint64_t>(trial));
    ++report.total;
    TrialResult r;
    try {
      r = runBoth(e, engine, cfg.fuel);
    } catch (const RuleEvalError&) {
      ++report.inconclusive;
      continue;
    }
    if (r.classic.kind == Outcome::Kind::OutOfFuel ||
        r.efficient.kind == Outcome::Kind::OutOfFuel) {
      ++report.inconclusive;
      continue;
    }
    if (!r.disagree) {
      ++report.agreed;
      if (r.classic.kind == Outcome::Kind::Blame) ++report.blameAgreed;
      continue;
    }
    TermPtr shrunk = shrinkDisagreement(e, engine, cfg.fuel);
    TrialResult rs = runBoth(shrunk, engine, cfg.fuel);
    report.disagreements.push_back(
        Disagreement{printTerm(shrunk), rs.classic, rs.efficient});
  }
  return report;
}

CongruenceReport congruenceTest(long samples, const GenConfig& cfg,
                                const ImplicationEngine& engine) {
  CongruenceReport report;
  for (long trial = 0; trial < samples; ++trial) {
    TermPtr e1 = genProgram(cfg, static_cast<std::uint64_t>(trial));
    BaseType b = std::get<Type::Base>(typeOfTerm(e1)->node).base;
    if (isEffValue(e1)) {
      // Make the subject steppable without changing its outcome.
      e1 = mkApp(mkAbs("x", tBase(b), mkVar("x")), e1);
    }
    LabeledPtr c =
        genLabeledBaseContract(cfg, static_cast<std::uint64_t>(trial), b);
    StepResult s = stepEff(e1, engine);
    if (s.kind != StepResult::Kind::Stepped) {
      ++report.skipped;
      continue;
    }
    TermPtr e2 = s.term;
    ++report.total;
    Outcome o1 = evalEffOutcome(mkMonE(c, e1), engine, cfg.fuel);
    Outcome o2 = evalEffOutcome(mkMonE(c, e2), engine, cfg.fuel);
    if (outcomesAgree(o1, o2)) {
      ++report.agreed;
    } else {
      report.failures.push_back(printTerm(mkMonE(c, e1)));
    }
  }
  return report;
}

}  // namespace cpcf

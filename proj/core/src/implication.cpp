#include "cpcf/implication.hpp"

#include <algorithm>
#include <sstream>

#include "cpcf/eval_classic.hpp"
#include "cpcf/subst.hpp"
#include "cpcf/surface.hpp"
#include "cpcf/types.hpp"

namespace cpcf {

namespace {

// A sigma value is usable in a rule condition only if it is a closed source
// value (no free variables, no runtime-only forms).
bool usableInCondition(const TermPtr& v) {
  return freeVars(v).empty() && isSourceProgram(v);
}

std::string describePred(const Pred& p) {
  std::ostringstream os;
  os << "pred";
  if (p.predName) os << "[" << *p.predName << "]";
  os << "_[";
  bool first = true;
  for (const auto& [name, value] : p.sigma) {
    if (!first) os << ", ";
    first = false;
    os << name << " -> " << printTerm(value);
  }
  os << "](" << printTerm(p.body) << ")";
  return os.str();
}

}  // namespace

bool ImplicationEngine::implies(const Pred& p1, const Pred& p2) const {
  auto tag = [](const Pred& p) {
    return (p.predName ? *p.predName : std::string("?")) + "\x1f" +
           canonicalKeyPred(p.sigma, p.body);
  };
  std::pair<std::string, std::string> memoKey{tag(p1), tag(p2)};
  if (auto it = memo_.find(memoKey); it != memo_.end()) return it->second;

  bool result = false;
  // Baseline: alpha-equal bodies with pointwise value-equal environments.
  if (alphaEq(p1.body, p2.body) && sigmaEq(p1.sigma, p2.sigma)) {
    result = true;
  } else if (p1.predName && p2.predName) {
    for (const Rule& rule : rules_) {
      if (rule.leftPred != *p1.predName || rule.rightPred != *p2.predName) {
        continue;
      }
      // Bind each condition variable v1 / v2 from sigma1 / sigma2.
      SubstMap binding;
      bool applicable = true;
      for (const std::string& fv : freeVars(rule.condition)) {
        char side = fv.back();
        std::string base = fv.substr(0, fv.size() - 1);
        const ClosingSubstitution& sigma = side == '1' ? p1.sigma : p2.sigma;
        const TermPtr* value = sigmaLookup(sigma, base);
        if (!value || !usableInCondition(*value)) {
          applicable = false;
          break;
        }
        binding.emplace(fv, *value);
      }
      if (!applicable) continue;
      TermPtr closed = substTermMulti(rule.condition, binding);
      Outcome out = evalClassicOutcome(closed, conditionFuel_);
      if (out.kind == Outcome::Kind::Value) {
        if (std::get<Term::ConstBool>(out.value->node).value) {
          result = true;
          break;
        }
        continue;  // condition false: try the next rule
      }
      ++warnings_;
      std::ostringstream msg;
      msg << "rule '" << rule.leftPred << " implies " << rule.rightPred
          << "' condition "
          << (out.kind == Outcome::Kind::Blame
                  ? "raised blame " + out.label
                  : "ran out of fuel")
          << " on " << describePred(p1) << " vs " << describePred(p2);
      throw RuleEvalError(rule.leftPred, rule.rightPred, out.kind, msg.str());
    }
  }
  memo_.emplace(memoKey, result);
  return result;
}

bool ImplicationEngine::implies(const LabeledPred& p1,
                                const LabeledPred& p2) const {
  return implies(Pred{p1.predName, p1.sigma, p1.body},
                 Pred{p2.predName, p2.sigma, p2.body});
}

namespace {

// Base type a predicate checks, from the type of its closed body.
std::optional<BaseType> baseOfPred(const Pred& p) {
  try {
    TypePtr t = typeOfTerm(applyClosing(p.sigma, p.body));
    if (auto* arrow = std::get_if<Type::Arrow>(&t->node)) {
      if (auto* base = std::get_if<Type::Base>(&arrow->dom->node)) {
        return base->base;
      }
    }
  } catch (const TypeError&) {
  }
  return std::nullopt;
}

// Does sigma(body) k evaluate to true within the fuel budget?
bool predHolds(const Pred& p, const TermPtr& k, long fuel) {
  Outcome out = evalClassicOutcome(mkApp(applyClosing(p.sigma, p.body), k), fuel);
  if (out.kind != Outcome::Kind::Value) return false;
  auto* b = std::get_if<Term::ConstBool>(&out.value->node);
  return b && b->value;
}

std::vector<TermPtr> adequacySamples(
    BaseType base, const Pred& p1, const Pred& p2,
    const std::map<BaseType, std::vector<TermPtr>>& constSamples) {
  std::vector<TermPtr> out;
  if (auto it = constSamples.find(base); it != constSamples.end()) {
    out = it->second;
  } else if (base == BaseType::Bool) {
    out = {mkBool(false), mkBool(true)};
  } else {
    for (int i = -17; i <= 17; ++i) out.push_back(mkInt(i));
  }
  if (base == BaseType::Int) {
    // Widen with sigma-derived integers +/- 2 from both predicates.
    std::set<Int> seen;
    for (const TermPtr& t : out) {
      if (auto* c = std::get_if<Term::ConstInt>(&t->node)) seen.insert(c->value);
    }
    for (const Pred* p : {&p1, &p2}) {
      for (const auto& [name, value] : p->sigma) {
        if (auto* c = std::get_if<Term::ConstInt>(&value->node)) {
          for (int d = -2; d <= 2; ++d) {
            Int k = c->value + d;
            if (seen.insert(k).second) out.push_back(mkInt(k));
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

AxiomReport verifyAxioms(
    const ImplicationEngine& engine, const std::vector<Pred>& pool,
    const std::map<BaseType, std::vector<TermPtr>>& constSamples,
    long tripleSamples) {
  AxiomReport report;
  const long n = static_cast<long>(pool.size());
  const long fuel = engine.conditionFuel();

  // Reflexivity: exact over the pool.
  for (const Pred& p : pool) {
    if (!engine.implies(p, p)) {
      report.reflexivity.ok = false;
      report.reflexivity.counterexample = describePred(p);
      break;
    }
  }

  // Transitivity: deterministic LCG-sampled triples (all triples if few).
  if (n > 0) {
    unsigned long long lcg = 0x9e3779b97f4a7c15ull;
    auto next = [&lcg]() {
      lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
      return lcg >> 16;
    };
    long total = n * n * n;
    bool exhaustive = total <= tripleSamples;
    long count = exhaustive ? total : tripleSamples;
    for (long s = 0; s < count && report.transitivity.ok; ++s) {
      long idx = exhaustive ? s : static_cast<long>(next() % total);
      const Pred& a = pool[idx % n];
      const Pred& b = pool[(idx / n) % n];
      const Pred& c = pool[(idx / (n * n)) % n];
      if (engine.implies(a, b) && engine.implies(b, c) &&
          !engine.implies(a, c)) {
        report.transitivity.ok = false;
        report.transitivity.counterexample = describePred(a) + " > " +
                                             describePred(b) + " > " +
                                             describePred(c);
      }
    }
  }

  // Substitutivity: implication is preserved by substituting sampled closed
  // values for a variable through both predicates' environments.
  const std::vector<TermPtr> substValues = {mkInt(0), mkInt(7), mkInt(-3),
                                            mkBool(true)};
  for (const Pred& p1 : pool) {
    if (!report.substitutivity.ok) break;
    for (const Pred& p2 : pool) {
      if (!report.substitutivity.ok) break;
      if (!engine.implies(p1, p2)) continue;
      for (const TermPtr& v : substValues) {
        for (const std::string& x : {std::string("z"), std::string("y")}) {
          auto [s1, ch1] = substSigma(p1.sigma, p1.body, x, v);
          auto [s2, ch2] = substSigma(p2.sigma, p2.body, x, v);
          Pred q1{p1.predName, s1, p1.body};
          Pred q2{p2.predName, s2, p2.body};
          if (!engine.implies(q1, q2)) {
            report.substitutivity.ok = false;
            report.substitutivity.counterexample =
                describePred(q1) + " !> " + describePred(q2) + " after [" +
                printTerm(v) + "/" + x + "]";
            break;
          }
        }
        if (!report.substitutivity.ok) break;
      }
    }
  }

  // Adequacy: whenever p1 > p2, every sampled k satisfying p1 satisfies p2.
  for (const Pred& p1 : pool) {
    if (!report.adequacy.ok) break;
    for (const Pred& p2 : pool) {
      if (!engine.implies(p1, p2)) continue;
      auto b1 = baseOfPred(p1);
      auto b2 = baseOfPred(p2);
      if (!b1 || !b2 || *b1 != *b2) continue;
      for (const TermPtr& k : adequacySamples(*b1, p1, p2, constSamples)) {
        if (predHolds(p1, k, fuel) && !predHolds(p2, k, fuel)) {
          report.adequacy.ok = false;
          report.adequacy.counterexample = describePred(p1) + " > " +
                                           describePred(p2) +
                                           " fails at k = " + printTerm(k);
          report.adequacyWitness = k;
          report.adequacyLeft = p1;
          report.adequacyRight = p2;
          break;
        }
      }
      if (!report.adequacy.ok) break;
    }
  }

  return report;
}

namespace {

// Collect every predicate occurrence in a term, names preserved.
void collectPreds(const TermPtr& e, std::vector<Pred>& out);

void collectPredsContract(const ContractPtr& c, std::vector<Pred>& out) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    out.push_back(*p);
    for (const auto& [name, value] : p->sigma) collectPreds(value, out);
    collectPreds(p->body, out);
    return;
  }
  const auto& f = std::get<Contract::DepFun>(c->node);
  collectPredsContract(f.dom, out);
  collectPredsContract(f.cod, out);
}

void collectPredsLabeled(const LabeledPtr& c, std::vector<Pred>& out) {
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {
    for (const LabeledPred& p : s->preds) {
      out.push_back(Pred{p.predName, p.sigma, p.body});
      for (const auto& [name, value] : p.sigma) collectPreds(value, out);
      collectPreds(p.body, out);
    }
    return;
  }
  const auto& f = std::get<LabeledContract::DepFun>(c->node);
  collectPredsLabeled(f.dom, out);
  collectPredsLabeled(f.cod, out);
}

void collectPreds(const TermPtr& e, std::vector<Pred>& out) {
  struct V {
    std::vector<Pred>& out;
    void operator()(const Term::Var&) {}
    void operator()(const Term::ConstInt&) {}
    void operator()(const Term::ConstBool&) {}
    void operator()(const Term::Err&) {}
    void operator()(const Term::Op& n) {
      collectPreds(n.lhs, out);
      collectPreds(n.rhs, out);
    }
    void operator()(const Term::App& n) {
      collectPreds(n.fn, out);
      collectPreds(n.arg, out);
    }
    void operator()(const Term::Abs& n) { collectPreds(n.body, out); }
    void operator()(const Term::Fix& n) { collectPreds(n.body, out); }
    void operator()(const Term::If& n) {
      collectPreds(n.cond, out);
      collectPreds(n.thenBranch, out);
      collectPreds(n.elseBranch, out);
    }
    void operator()(const Term::MonC& n) {
      collectPredsContract(n.contract, out);
      collectPreds(n.subject, out);
    }
    void operator()(const Term::MonE& n) {
      collectPredsLabeled(n.labeled, out);
      collectPreds(n.subject, out);
    }
  };
  std::visit(V{out}, e->node);
}

bool typesAtPredicate(const Pred& p) {
  try {
    TypePtr t = typeOfTerm(applyClosing(p.sigma, p.body));
    if (auto* arrow = std::get_if<Type::Arrow>(&t->node)) {
      auto* cod = std::get_if<Type::Base>(&arrow->cod->node);
      return std::holds_alternative<Type::Base>(arrow->dom->node) && cod &&
             cod->base == BaseType::Bool;
    }
  } catch (const TypeError&) {
  }
  return false;
}

}  // namespace

std::vector<Pred> buildPredPool(const TermPtr& program, long gridLo,
                                long gridHi) {
  std::vector<Pred> raw;
  collectPreds(program, raw);

  std::vector<TermPtr> gridValues;
  for (long k = gridLo; k <= gridHi; ++k) gridValues.push_back(mkInt(k));
  gridValues.push_back(mkBool(false));
  gridValues.push_back(mkBool(true));

  std::vector<Pred> pool;
  std::set<std::string> seen;
  auto add = [&](const Pred& p) {
    std::string key = (p.predName ? *p.predName : std::string("?")) + "\x1f" +
                      canonicalKeyPred(p.sigma, p.body);
    if (seen.insert(key).second) pool.push_back(p);
  };

  for (const Pred& p : raw) {
    std::set<std::string> fvSet = freeVarsPred(p.sigma, p.body);
    if (fvSet.empty()) {
      if (typesAtPredicate(p)) add(p);
      continue;
    }
    if (fvSet.size() > 2) continue;
    std::vector<std::string> fvs(fvSet.begin(), fvSet.end());
    if (fvs.size() == 1) {
      for (const TermPtr& v : gridValues) {
        ClosingSubstitution sigma = p.sigma;
        sigma.emplace_back(fvs[0], v);
        Pred inst{p.predName, std::move(sigma), p.body};
        if (typesAtPredicate(inst)) add(inst);
      }
    } else {
      for (const TermPtr& v1 : gridValues) {
        for (const TermPtr& v2 : gridValues) {
          ClosingSubstitution sigma = p.sigma;
          sigma.emplace_back(fvs[0], v1);
          sigma.emplace_back(fvs[1], v2);
          Pred inst{p.predName, std::move(sigma), p.body};
          if (typesAtPredicate(inst)) add(inst);
        }
      }
    }
  }
  return pool;
}

}  // namespace cpcf

// Capture-avoiding substitution for terms, contracts, labeled contracts, and
// predicate stacks, including the delayed-substitution discipline for
// predicates (pred_sigma(e)[v/x] = pred_{sigma[x->v]}(e) when x in fv(sigma(e))).
#pragma once

#include <map>

#include "cpcf/ast.hpp"

namespace cpcf {

// Fresh-name generation for capture avoidance: x, x$1, x$2, ... backed by a
// thread-local counter. Evaluators reset it at entry so traces are
// deterministic per evaluation.
std::string freshName(const std::string& base);
void resetFreshNames();

// Resets the fresh-name counter on entry to an *outermost* evaluation only,
// so rule-condition evaluations nested inside a join don't disturb the
// enclosing evaluation's name supply.
struct FreshNameScope {
  FreshNameScope();
  ~FreshNameScope();
  FreshNameScope(const FreshNameScope&) = delete;
  FreshNameScope& operator=(const FreshNameScope&) = delete;
};

// Simultaneous substitution map.
using SubstMap = std::map<std::string, TermPtr>;

TermPtr substTermMulti(const TermPtr& e, const SubstMap& m);
TermPtr substTerm(const TermPtr& e, const std::string& x, const TermPtr& v);

// Delayed substitution into a predicate's closing environment. sigma[x->v]
// applies [v/x] pointwise to sigma's range, then extends with x->v if x is
// still free in the sigma-applied body and unbound. Returns the pair
// (sigma', changed).
std::pair<ClosingSubstitution, bool> substSigma(const ClosingSubstitution& sigma,
                                                const TermPtr& body,
                                                const std::string& x,
                                                const TermPtr& v);

ContractPtr substContract(const ContractPtr& c, const std::string& x,
                          const TermPtr& v);
LabeledPtr substLabeled(const LabeledPtr& c, const std::string& x,
                        const TermPtr& v);

// sigma(e): simultaneous application of all sigma entries to e.
TermPtr applyClosing(const ClosingSubstitution& sigma, const TermPtr& e);

// Variable renaming (x -> y) on labeled contracts; used to align dependent
// binders before join. y must be fresh for c.
LabeledPtr renameVarLabeled(const LabeledPtr& c, const std::string& x,
                            const std::string& y);

}  // namespace cpcf

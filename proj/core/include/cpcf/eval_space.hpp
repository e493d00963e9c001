// Space-efficient evaluator: contract labeling, the join/drop/wrap algebra on
// labeled contracts, and the restricted-congruence monitor rules.
#pragma once

#include "cpcf/ast.hpp"
#include "cpcf/eval_common.hpp"
#include "cpcf/implication.hpp"

namespace cpcf {

// Which predicate keys the recursion in drop's implied case: the removed
// stack head (as the defining equations are written) or the probing
// predicate. The two coincide under the equality engine.
enum class DropKey { Removed, Probe };

// label^l(C): predicates become singleton labeled stacks; function contracts
// map the label into both sides.
LabeledPtr labelContract(const std::string& label, const ContractPtr& c);

// drop(r, p): removes stack entries implied by p.
PredicateStack dropStack(const PredicateStack& r, const Pred& p,
                         const ImplicationEngine& engine,
                         DropKey dropKey = DropKey::Removed);

// join(c1, c2): merge for colliding monitors mon(c2, mon(c1, e)); c1 (the
// inner, newer contract) wins — its entries are kept and implied entries of
// c2 are dropped.
LabeledPtr joinContracts(const LabeledPtr& c1, const LabeledPtr& c2,
                         const ImplicationEngine& engine,
                         DropKey dropKey = DropKey::Removed);

// wrap(c, x, cArg): records in c's predicate environments that x must be
// monitored by the domain contract cArg, replicating the substitution the
// classic semantics would have performed.
LabeledPtr wrapContract(const LabeledPtr& c, const std::string& x,
                        const LabeledPtr& cArg,
                        const ImplicationEngine& engine,
                        DropKey dropKey = DropKey::Removed);

// Efficient values: constants, lambdas, and single proxies mon(x:c1->c2, λ…).
bool isEffValue(const TermPtr& e);

StepResult stepEff(const TermPtr& e, const ImplicationEngine& engine,
                   DropKey dropKey = DropKey::Removed);

EvalResult evalEff(const TermPtr& e, const ImplicationEngine& engine,
                   const EvalOptions& opts = {},
                   DropKey dropKey = DropKey::Removed);
Outcome evalEffOutcome(const TermPtr& e, const ImplicationEngine& engine,
                       long fuel = 100000);

}  // namespace cpcf

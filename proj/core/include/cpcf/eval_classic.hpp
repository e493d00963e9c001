// Small-step evaluator for CPCFc: shared PCF rules plus the classic monitor
// rules E-MonPred / E-MonApp / E-Mon / E-MonRaise, with fuel and step
// instrumentation.
#pragma once

#include "cpcf/eval_common.hpp"

namespace cpcf {

// Classic values: constants, lambdas, and arbitrarily nested function proxies
// mon^l(x:C1 -> C2, v).
bool isClassicValue(const TermPtr& e);

StepResult stepClassic(const TermPtr& e);

EvalResult evalClassic(const TermPtr& e, const EvalOptions& opts = {});

// Outcome-only convenience (used for rule-condition evaluation).
Outcome evalClassicOutcome(const TermPtr& e, long fuel);

// E-Delta: applies a primitive to two constant operands; mod by zero yields
// err^div0. Shared with the space-efficient evaluator.
TermPtr deltaOp(OpTag op, const TermPtr& lhs, const TermPtr& rhs);

}  // namespace cpcf

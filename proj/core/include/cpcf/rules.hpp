// Implication rules of the rule DSL:
//   rule <predName> implies <predName> when <term>
// Condition free variables have the shape <var>1 / <var>2, referring to the
// bindings of the left/right closing substitutions.
#pragma once

#include <string>
#include <vector>

#include "cpcf/ast.hpp"

namespace cpcf {

struct Rule {
  std::string leftPred;
  std::string rightPred;
  TermPtr condition;
};

using RuleSet = std::vector<Rule>;

}  // namespace cpcf

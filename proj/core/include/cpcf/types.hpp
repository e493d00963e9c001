// Typechecker for CPCF terms, contracts, labeled contracts, and closing
// substitutions (judgments Γ ⊢ e : T, Γ ⊢ C : T, Γ ⊢ c : T).
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cpcf/ast.hpp"

namespace cpcf {

// Γ: ordered bindings, innermost last; lookup respects shadowing.
class TypeEnv {
 public:
  void push(const std::string& name, TypePtr ty) {
    bindings_.emplace_back(name, std::move(ty));
  }
  void pop() { bindings_.pop_back(); }
  const TypePtr* lookup(const std::string& name) const {
    for (size_t i = bindings_.size(); i-- > 0;) {
      if (bindings_[i].first == name) return &bindings_[i].second;
    }
    return nullptr;
  }
  bool empty() const { return bindings_.empty(); }

 private:
  std::vector<std::pair<std::string, TypePtr>> bindings_;
};

enum class TypeErrorKind {
  UnboundVar,
  Mismatch,
  NotAFunction,
  BadPredicateType,
  BadSubstitution,
};

struct TypeError : std::runtime_error {
  TypeErrorKind kind;
  std::string detail;  // names the offending subterm
  TypeError(TypeErrorKind k, std::string msg)
      : std::runtime_error(msg), kind(k), detail(std::move(msg)) {}
};

// Synthesizes the unique type of e; throws TypeError. Err nodes synthesize
// the internal Any wildcard (T-Blame allows any type).
TypePtr typeOfTerm(TypeEnv& env, const TermPtr& e);
TypePtr typeOfContract(TypeEnv& env, const ContractPtr& c);
TypePtr typeOfLabeled(TypeEnv& env, const LabeledPtr& c);

// Convenience wrappers over an empty environment.
TypePtr typeOfTerm(const TermPtr& e);
TypePtr typeOfContract(const ContractPtr& c);

std::string showType(const TypePtr& t);

}  // namespace cpcf

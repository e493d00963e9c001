// Shared helpers for the unit tests.
#pragma once

#include <string>

#include "cpcf/ast.hpp"
#include "cpcf/implication.hpp"
#include "cpcf/surface.hpp"

namespace cpcftest {

inline cpcf::TermPtr tm(const std::string& src) {
  return cpcf::parseTermString(src);
}

inline std::string examplePath(const std::string& name) {
  return std::string(CPCF_EXAMPLES_DIR) + "/" + name;
}

// Implication callback backed by an engine (used for isSimple).
inline cpcf::ImpliesFn impliesFn(const cpcf::ImplicationEngine& engine) {
  return [&engine](const std::optional<std::string>& n1,
                   const cpcf::ClosingSubstitution& s1,
                   const cpcf::TermPtr& b1,
                   const std::optional<std::string>& n2,
                   const cpcf::ClosingSubstitution& s2,
                   const cpcf::TermPtr& b2) {
    return engine.implies(cpcf::Pred{n1, s1, b1}, cpcf::Pred{n2, s2, b2});
  };
}

}  // namespace cpcftest

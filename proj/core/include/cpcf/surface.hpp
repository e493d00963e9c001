// Concrete syntax: parser and pretty-printer for programs (.cpcf), contracts,
// and implication-rule files (.impl). Line comments start with --.
#pragma once

#include <stdexcept>
#include <string>

#include "cpcf/ast.hpp"
#include "cpcf/rules.hpp"

namespace cpcf {

struct SourceText {
  std::string text;
  std::string origin = "<string>";
};

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error(msg), line(l), column(c) {}
};

// A rule condition referenced a variable not of the <var>1 / <var>2 shape.
struct ArityError : ParseError {
  using ParseError::ParseError;
};

TermPtr parseTerm(const SourceText& src);
RuleSet parseRules(const SourceText& src);

// Convenience overloads.
TermPtr parseTermString(const std::string& text);
RuleSet parseRulesString(const std::string& text);
TermPtr parseTermFile(const std::string& path);
RuleSet parseRulesFile(const std::string& path);

// printTerm(e) re-parses to an alpha-equal term for every MonE-free source
// term; MonE nodes print in a distinguished mon{...} trace form.
std::string printTerm(const TermPtr& e);
std::string printContract(const ContractPtr& c);
std::string printLabeled(const LabeledPtr& c);
std::string printType(const TypePtr& t);

}  // namespace cpcf

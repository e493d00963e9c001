// Abstract syntax for dependent Contract PCF (CPCF): types, terms, contracts,
// labeled contracts, predicate stacks, and closing substitutions, plus
// free-variable and alpha-equality services shared by every other module.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cpcf {

using Int = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Types: T ::= B | T1 -> T2
// ---------------------------------------------------------------------------

enum class BaseType { Int, Bool };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  struct Base {
    BaseType base;
  };
  struct Arrow {
    TypePtr dom;
    TypePtr cod;
  };
  // Runtime-only wildcard: the type synthesized for err nodes (T-Blame allows
  // any type). Never appears in source-level annotations.
  struct Any {};

  std::variant<Base, Arrow, Any> node;
};

TypePtr tInt();
TypePtr tBool();
TypePtr tBase(BaseType b);
TypePtr tArrow(TypePtr dom, TypePtr cod);
TypePtr tAny();

bool typeEq(const TypePtr& a, const TypePtr& b);
// Equality up to the Any wildcard (used when comparing types of terms that may
// contain err nodes).
bool typesCompatible(const TypePtr& a, const TypePtr& b);
// Most specific common type of two compatible types; nullptr if incompatible.
TypePtr typeMeet(const TypePtr& a, const TypePtr& b);

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

enum class OpTag { Add, Sub, Mul, Mod, Eq, Lt, Le, Gt, Ge, Or, And };

struct OpSig {
  BaseType lhs;
  BaseType rhs;
  BaseType result;
};
OpSig opSignature(OpTag op);
const char* opSymbol(OpTag op);

// ---------------------------------------------------------------------------
// Terms and contracts
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;
struct Contract;
using ContractPtr = std::shared_ptr<const Contract>;
struct LabeledContract;
using LabeledPtr = std::shared_ptr<const LabeledContract>;

// Ordered map name -> term; insertion order is preserved so printing is
// deterministic. The identity substitution is the empty vector.
using ClosingSubstitution = std::vector<std::pair<std::string, TermPtr>>;

const TermPtr* sigmaLookup(const ClosingSubstitution& sigma,
                           const std::string& name);

// Source contract: pred_sigma(e) or x:C1 -> C2.
struct Pred {
  std::optional<std::string> predName;  // for the rule DSL; inert otherwise
  ClosingSubstitution sigma;
  TermPtr body;
};

struct Contract {
  struct DepFun {
    std::string param;
    ContractPtr dom;
    ContractPtr cod;
  };
  std::variant<Pred, DepFun> node;
};

// Labeled predicate: pred^l_sigma(e), one entry of a predicate stack.
struct LabeledPred {
  std::string label;
  std::optional<std::string> predName;
  ClosingSubstitution sigma;
  TermPtr body;
};

// r ::= nil | pred^l_sigma(e) ; r.  nil carries its base type (nil@B) because
// T-CNil alone cannot infer one.
struct PredicateStack {
  BaseType base;
  std::vector<LabeledPred> preds;  // preds[0] is the head (checked first)
};

struct LabeledContract {
  struct DepFun {
    std::string param;
    LabeledPtr dom;
    LabeledPtr cod;
  };
  std::variant<PredicateStack, DepFun> node;
};

struct Term {
  struct Var {
    std::string name;
  };
  struct ConstInt {
    Int value;
  };
  struct ConstBool {
    bool value;
  };
  struct Op {
    OpTag op;
    TermPtr lhs;
    TermPtr rhs;
  };
  struct App {
    TermPtr fn;
    TermPtr arg;
  };
  struct Abs {
    std::string param;
    TypePtr paramType;
    TermPtr body;
  };
  struct Fix {  // mu(x:T). e
    std::string param;
    TypePtr paramType;
    TermPtr body;
  };
  struct If {
    TermPtr cond;
    TermPtr thenBranch;
    TermPtr elseBranch;
  };
  struct Err {
    std::string label;
  };
  struct MonC {  // mon^l(C, e) — source-form monitor
    std::string label;
    ContractPtr contract;
    TermPtr subject;
  };
  struct MonE {  // mon(c, e) — runtime labeled monitor, never in source
    LabeledPtr labeled;
    TermPtr subject;
  };

  std::variant<Var, ConstInt, ConstBool, Op, App, Abs, Fix, If, Err, MonC,
               MonE>
      node;
};

// Constructors.
TermPtr mkVar(std::string name);
TermPtr mkInt(Int v);
TermPtr mkBool(bool v);
TermPtr mkOp(OpTag op, TermPtr l, TermPtr r);
TermPtr mkApp(TermPtr f, TermPtr a);
TermPtr mkAbs(std::string param, TypePtr ty, TermPtr body);
TermPtr mkFix(std::string param, TypePtr ty, TermPtr body);
TermPtr mkIf(TermPtr c, TermPtr t, TermPtr e);
TermPtr mkErr(std::string label);
TermPtr mkMonC(std::string label, ContractPtr c, TermPtr subject);
TermPtr mkMonE(LabeledPtr c, TermPtr subject);

ContractPtr mkPred(std::optional<std::string> name, ClosingSubstitution sigma,
                   TermPtr body);
ContractPtr mkDepFun(std::string param, ContractPtr dom, ContractPtr cod);
LabeledPtr mkStack(BaseType base, std::vector<LabeledPred> preds);
LabeledPtr mkLDepFun(std::string param, LabeledPtr dom, LabeledPtr cod);

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

std::set<std::string> freeVars(const TermPtr& e);
std::set<std::string> freeVarsContract(const ContractPtr& c);
std::set<std::string> freeVarsLabeled(const LabeledPtr& c);
// fv of a predicate = fv of the sigma-applied body:
// (fv(body) \ dom sigma) ∪ fv(range sigma).
std::set<std::string> freeVarsPred(const ClosingSubstitution& sigma,
                                   const TermPtr& body);

// ---------------------------------------------------------------------------
// Alpha equality and canonical printing
// ---------------------------------------------------------------------------

bool alphaEq(const TermPtr& a, const TermPtr& b);
bool alphaEqContract(const ContractPtr& a, const ContractPtr& b);
bool alphaEqLabeled(const LabeledPtr& a, const LabeledPtr& b);
// Pointwise comparison as finite maps (order-insensitive), values alpha-equal.
bool sigmaEq(const ClosingSubstitution& a, const ClosingSubstitution& b);

// Canonical string form: bound variables printed as de Bruijn indices, sigma
// entries name-sorted. Two terms have equal canonical strings iff alphaEq.
// Used for hashing (engine memo tables, PredKey identity).
std::string canonicalKey(const TermPtr& e);
std::string canonicalKeyPred(const ClosingSubstitution& sigma,
                             const TermPtr& body);

// ---------------------------------------------------------------------------
// Source-program and simplicity predicates
// ---------------------------------------------------------------------------

// True iff e contains no Err and no MonE node.
bool isSourceProgram(const TermPtr& e);

// Implication callback: implies(name1, sigma1, body1, name2, sigma2, body2).
using ImpliesFn = std::function<bool(
    const std::optional<std::string>&, const ClosingSubstitution&,
    const TermPtr&, const std::optional<std::string>&,
    const ClosingSubstitution&, const TermPtr&)>;

// True iff every predicate in e is closed with empty sigma and every
// predicate stack is free of pairwise-implied entries under `implies`.
bool isSimple(const TermPtr& e, const ImpliesFn& implies);

}  // namespace cpcf

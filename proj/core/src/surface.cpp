#include "cpcf/surface.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "cpcf/types.hpp"

namespace cpcf {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  Ident,
  IntLit,
  KwFun,
  KwMu,
  KwIf,
  KwThen,
  KwElse,
  KwLet,
  KwIn,
  KwMon,
  KwErr,
  KwPred,
  KwTrue,
  KwFalse,
  KwAnd,
  KwOr,
  KwMod,
  KwRule,
  KwImplies,
  KwWhen,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Caret,
  Comma,
  Dot,
  Colon,
  FatArrow,  // =>
  Arrow,     // ->
  EqSym,
  Le,
  Lt,
  Ge,
  Gt,
  Plus,
  Minus,
  Star,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

Tok keywordKind(const std::string& s) {
  if (s == "fun") return Tok::KwFun;
  if (s == "mu") return Tok::KwMu;
  if (s == "if") return Tok::KwIf;
  if (s == "then") return Tok::KwThen;
  if (s == "else") return Tok::KwElse;
  if (s == "let") return Tok::KwLet;
  if (s == "in") return Tok::KwIn;
  if (s == "mon") return Tok::KwMon;
  if (s == "err") return Tok::KwErr;
  if (s == "pred") return Tok::KwPred;
  if (s == "true") return Tok::KwTrue;
  if (s == "false") return Tok::KwFalse;
  if (s == "and") return Tok::KwAnd;
  if (s == "or") return Tok::KwOr;
  if (s == "mod") return Tok::KwMod;
  if (s == "rule") return Tok::KwRule;
  if (s == "implies") return Tok::KwImplies;
  if (s == "when") return Tok::KwWhen;
  return Tok::Ident;
}

std::vector<Token> lex(const SourceText& src) {
  std::vector<Token> out;
  const std::string& s = src.text;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (i < s.size() && s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    auto emit = [&](Tok k, std::string text, size_t n) {
      out.push_back(Token{k, std::move(text), tl, tc});
      advance(n);
    };
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      emit(Tok::IntLit, s.substr(i, j - i), j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
              s[j] == '$' || s[j] == '\'')) {
        ++j;
      }
      std::string word = s.substr(i, j - i);
      emit(keywordKind(word), word, j - i);
      continue;
    }
    switch (c) {
      case '(': emit(Tok::LParen, "(", 1); continue;
      case ')': emit(Tok::RParen, ")", 1); continue;
      case '[': emit(Tok::LBracket, "[", 1); continue;
      case ']': emit(Tok::RBracket, "]", 1); continue;
      case '^': emit(Tok::Caret, "^", 1); continue;
      case ',': emit(Tok::Comma, ",", 1); continue;
      case '.': emit(Tok::Dot, ".", 1); continue;
      case ':': emit(Tok::Colon, ":", 1); continue;
      case '+': emit(Tok::Plus, "+", 1); continue;
      case '*': emit(Tok::Star, "*", 1); continue;
      case '=':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          emit(Tok::FatArrow, "=>", 2);
        } else {
          emit(Tok::EqSym, "=", 1);
        }
        continue;
      case '<':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          emit(Tok::Le, "<=", 2);
        } else {
          emit(Tok::Lt, "<", 1);
        }
        continue;
      case '>':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          emit(Tok::Ge, ">=", 2);
        } else {
          emit(Tok::Gt, ">", 1);
        }
        continue;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          emit(Tok::Arrow, "->", 2);
        } else {
          emit(Tok::Minus, "-", 1);
        }
        continue;
      default:
        throw ParseError(line, col,
                         std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const SourceText& src) : toks_(lex(src)) {}

  TermPtr parseProgram() {
    TermPtr t = parseTermTop();
    expect(Tok::End, "end of input");
    return t;
  }

  RuleSet parseRuleFile() {
    RuleSet rules;
    while (peek().kind != Tok::End) {
      expect(Tok::KwRule, "'rule'");
      std::string lhs = expectIdent("predicate name");
      expect(Tok::KwImplies, "'implies'");
      std::string rhs = expectIdent("predicate name");
      expect(Tok::KwWhen, "'when'");
      Token condTok = peek();
      TermPtr cond = parseTermTop();
      // Every free variable must have the <var>1 / <var>2 shape.
      for (const auto& v : freeVars(cond)) {
        if (v.size() < 2 || (v.back() != '1' && v.back() != '2')) {
          throw ArityError(condTok.line, condTok.col,
                           "rule condition variable '" + v +
                               "' is not of the <var>1 / <var>2 form");
        }
      }
      rules.push_back(Rule{std::move(lhs), std::move(rhs), std::move(cond)});
    }
    return rules;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  TypeEnv env_;  // parse-time scope, for typing let bindings / depfun binders

  const Token& peek(size_t off = 0) const {
    size_t i = pos_ + off;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void failHere(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.col,
                     "expected " + expected + ", found '" +
                         (t.kind == Tok::End ? "<eof>" : t.text) + "'");
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) failHere(what);
    return toks_[pos_++];
  }
  std::string expectIdent(const std::string& what) {
    return expect(Tok::Ident, what).text;
  }

  // ---- types ----

  TypePtr parseType() {
    TypePtr lhs = parseTypeAtom();
    if (accept(Tok::Arrow)) {
      return tArrow(lhs, parseType());  // right-associative
    }
    return lhs;
  }

  TypePtr parseTypeAtom() {
    if (accept(Tok::LParen)) {
      TypePtr t = parseType();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (peek().kind == Tok::Ident) {
      const Token& t = next();
      if (t.text == "Int") return tInt();
      if (t.text == "Bool") return tBool();
      throw ParseError(t.line, t.col, "unknown type '" + t.text + "'");
    }
    failHere("a type");
  }

  // ---- terms ----

  TermPtr parseTermTop() {
    switch (peek().kind) {
      case Tok::KwFun: {
        next();
        std::string x = expectIdent("parameter name");
        expect(Tok::Colon, "':'");
        TypePtr ty = parseType();
        expect(Tok::FatArrow, "'=>'");
        env_.push(x, ty);
        TermPtr body = parseTermTop();
        env_.pop();
        return mkAbs(std::move(x), std::move(ty), std::move(body));
      }
      case Tok::KwMu: {
        next();
        expect(Tok::LParen, "'('");
        std::string x = expectIdent("mu-bound name");
        expect(Tok::Colon, "':'");
        TypePtr ty = parseType();
        expect(Tok::RParen, "')'");
        expect(Tok::Dot, "'.'");
        env_.push(x, ty);
        TermPtr body = parseTermTop();
        env_.pop();
        return mkFix(std::move(x), std::move(ty), std::move(body));
      }
      case Tok::KwIf: {
        next();
        TermPtr c = parseTermTop();
        expect(Tok::KwThen, "'then'");
        TermPtr t = parseTermTop();
        expect(Tok::KwElse, "'else'");
        TermPtr e = parseTermTop();
        return mkIf(std::move(c), std::move(t), std::move(e));
      }
      case Tok::KwLet: {
        // let x [: T] = e1 in e2  ~~>  (fun x:T => e2) e1
        const Token& letTok = next();
        std::string x = expectIdent("let-bound name");
        TypePtr ty;
        if (accept(Tok::Colon)) ty = parseType();
        expect(Tok::EqSym, "'='");
        TermPtr bound = parseTermTop();
        if (!ty) {
          try {
            ty = typeOfTerm(env_, bound);
          } catch (const TypeError& err) {
            throw ParseError(letTok.line, letTok.col,
                             "cannot type let binding for '" + x +
                                 "': " + err.detail);
          }
        }
        expect(Tok::KwIn, "'in'");
        env_.push(x, ty);
        TermPtr body = parseTermTop();
        env_.pop();
        return mkApp(mkAbs(std::move(x), std::move(ty), std::move(body)),
                     std::move(bound));
      }
      default:
        return parseOr();
    }
  }

  TermPtr parseOr() {
    TermPtr lhs = parseAnd();
    while (accept(Tok::KwOr)) lhs = mkOp(OpTag::Or, lhs, parseAnd());
    return lhs;
  }
  TermPtr parseAnd() {
    TermPtr lhs = parseCmp();
    while (accept(Tok::KwAnd)) lhs = mkOp(OpTag::And, lhs, parseCmp());
    return lhs;
  }
  TermPtr parseCmp() {
    TermPtr lhs = parseAdd();
    OpTag op;
    switch (peek().kind) {
      case Tok::EqSym: op = OpTag::Eq; break;
      case Tok::Lt: op = OpTag::Lt; break;
      case Tok::Le: op = OpTag::Le; break;
      case Tok::Gt: op = OpTag::Gt; break;
      case Tok::Ge: op = OpTag::Ge; break;
      default: return lhs;
    }
    next();
    return mkOp(op, lhs, parseAdd());  // comparisons are non-associative
  }
  TermPtr parseAdd() {
    TermPtr lhs = parseMul();
    for (;;) {
      if (accept(Tok::Plus)) {
        lhs = mkOp(OpTag::Add, lhs, parseMul());
      } else if (accept(Tok::Minus)) {
        lhs = mkOp(OpTag::Sub, lhs, parseMul());
      } else {
        return lhs;
      }
    }
  }
  TermPtr parseMul() {
    TermPtr lhs = parseApp();
    for (;;) {
      if (accept(Tok::Star)) {
        lhs = mkOp(OpTag::Mul, lhs, parseApp());
      } else if (accept(Tok::KwMod)) {
        lhs = mkOp(OpTag::Mod, lhs, parseApp());
      } else {
        return lhs;
      }
    }
  }

  bool startsAtom(Tok k) const {
    switch (k) {
      case Tok::IntLit:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::Ident:
      case Tok::LParen:
      case Tok::KwMon:
      case Tok::KwErr:
        return true;
      default:
        return false;
    }
  }

  TermPtr parseApp() {
    TermPtr lhs = parseAtom(/*operandPosition=*/true);
    while (startsAtom(peek().kind)) {
      lhs = mkApp(lhs, parseAtom(/*operandPosition=*/false));
    }
    return lhs;
  }

  TermPtr parseAtom(bool operandPosition) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::IntLit:
        next();
        return mkInt(Int(t.text));
      case Tok::Minus:
        // Negative literal, only where an operand is required (so `x - 5`
        // still lexes as subtraction in parseAdd).
        if (operandPosition && peek(1).kind == Tok::IntLit) {
          next();
          const Token& lit = next();
          return mkInt(-Int(lit.text));
        }
        failHere("a term");
      case Tok::KwTrue:
        next();
        return mkBool(true);
      case Tok::KwFalse:
        next();
        return mkBool(false);
      case Tok::Ident:
        next();
        return mkVar(t.text);
      case Tok::LParen: {
        next();
        TermPtr inner = parseTermTop();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::KwErr: {
        next();
        expect(Tok::Caret, "'^'");
        return mkErr(expectIdent("blame label"));
      }
      case Tok::KwMon: {
        next();
        expect(Tok::Caret, "'^'");
        std::string label = expectIdent("blame label");
        expect(Tok::LParen, "'('");
        ContractPtr c = parseContract();
        expect(Tok::Comma, "','");
        TermPtr subject = parseTermTop();
        expect(Tok::RParen, "')'");
        return mkMonC(std::move(label), std::move(c), std::move(subject));
      }
      default:
        failHere("a term");
    }
  }

  // ---- contracts ----

  ContractPtr parseContract() {
    // Dependent form: ident ':' contractAtom '->' contract.
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Colon) {
      const Token& bt = peek();
      std::string x = next().text;
      next();  // ':'
      ContractPtr dom = parseContractAtom();
      expect(Tok::Arrow, "'->'");
      TypePtr domType;
      try {
        domType = typeOfContract(env_, dom);
      } catch (const TypeError& err) {
        throw ParseError(bt.line, bt.col,
                         "cannot type domain contract: " + err.detail);
      }
      env_.push(x, domType);
      ContractPtr cod = parseContract();
      env_.pop();
      return mkDepFun(std::move(x), std::move(dom), std::move(cod));
    }
    return parseContractAtom();
  }

  ContractPtr parseContractAtom() {
    if (accept(Tok::LParen)) {
      ContractPtr c = parseContract();
      expect(Tok::RParen, "')'");
      return c;
    }
    expect(Tok::KwPred, "'pred'");
    std::optional<std::string> name;
    if (accept(Tok::LBracket)) {
      name = expectIdent("predicate name");
      expect(Tok::RBracket, "']'");
    }
    expect(Tok::LParen, "'('");
    TermPtr body = parseTermTop();
    expect(Tok::RParen, "')'");
    return mkPred(std::move(name), {}, std::move(body));
  }
};

}  // namespace

TermPtr parseTerm(const SourceText& src) { return Parser(src).parseProgram(); }
RuleSet parseRules(const SourceText& src) { return Parser(src).parseRuleFile(); }

TermPtr parseTermString(const std::string& text) {
  return parseTerm(SourceText{text, "<string>"});
}
RuleSet parseRulesString(const std::string& text) {
  return parseRules(SourceText{text, "<string>"});
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TermPtr parseTermFile(const std::string& path) {
  return parseTerm(SourceText{slurp(path), path});
}
RuleSet parseRulesFile(const std::string& path) {
  return parseRules(SourceText{slurp(path), path});
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Precedence levels: 0 open forms, 1 or, 2 and, 3 comparisons, 4 additive,
// 5 multiplicative, 6 application, 7 atoms.
int opLevel(OpTag op) {
  switch (op) {
    case OpTag::Or: return 1;
    case OpTag::And: return 2;
    case OpTag::Eq:
    case OpTag::Lt:
    case OpTag::Le:
    case OpTag::Gt:
    case OpTag::Ge: return 3;
    case OpTag::Add:
    case OpTag::Sub: return 4;
    case OpTag::Mul:
    case OpTag::Mod: return 5;
  }
  return 3;
}

void printTermAt(const TermPtr& e, int level, std::ostringstream& os);

void printSigma(const ClosingSubstitution& sigma, std::ostringstream& os) {
  os << "_[";
  bool first = true;
  for (const auto& [k, v] : sigma) {
    if (!first) os << ", ";
    first = false;
    os << k << " -> ";
    printTermAt(v, 0, os);
  }
  os << "]";
}

void printContractAt(const ContractPtr& c, std::ostringstream& os) {
  if (auto* p = std::get_if<Pred>(&c->node)) {
    os << "pred";
    if (p->predName) os << "[" << *p->predName << "]";
    if (!p->sigma.empty()) printSigma(p->sigma, os);  // trace-only form
    os << "(";
    printTermAt(p->body, 0, os);
    os << ")";
    return;
  }
  const auto& f = std::get<Contract::DepFun>(c->node);
  os << f.param << ":";
  bool parens = std::holds_alternative<Contract::DepFun>(f.dom->node);
  if (parens) os << "(";
  printContractAt(f.dom, os);
  if (parens) os << ")";
  os << " -> ";
  printContractAt(f.cod, os);
}

void printLabeledAt(const LabeledPtr& c, std::ostringstream& os) {
  if (auto* s = std::get_if<PredicateStack>(&c->node)) {
    for (const auto& p : s->preds) {
      os << "pred^" << p.label;
      if (p.predName) os << "[" << *p.predName << "]";
      if (!p.sigma.empty()) printSigma(p.sigma, os);
      os << "(";
      printTermAt(p.body, 0, os);
      os << ");";
    }
    os << "nil@" << (s->base == BaseType::Int ? "Int" : "Bool");
    return;
  }
  const auto& f = std::get<LabeledContract::DepFun>(c->node);
  os << f.param << ":";
  bool parens = std::holds_alternative<LabeledContract::DepFun>(f.dom->node);
  if (parens) os << "(";
  printLabeledAt(f.dom, os);
  if (parens) os << ")";
  os << " -> ";
  printLabeledAt(f.cod, os);
}

void printTermAt(const TermPtr& e, int level, std::ostringstream& os) {
  struct V {
    int level;
    std::ostringstream& os;

    void paren(int myLevel, const std::function<void()>& body) {
      if (myLevel < level) {
        os << "(";
        body();
        os << ")";
      } else {
        body();
      }
    }

    void operator()(const Term::Var& n) { os << n.name; }
    void operator()(const Term::ConstInt& n) {
      if (n.value < 0) {
        os << "(" << n.value << ")";
      } else {
        os << n.value;
      }
    }
    void operator()(const Term::ConstBool& n) {
      os << (n.value ? "true" : "false");
    }
    void operator()(const Term::Err& n) { os << "err^" << n.label; }
    void operator()(const Term::Op& n) {
      int lv = opLevel(n.op);
      bool nonAssoc = lv == 3;
      paren(lv, [&] {
        printTermAt(n.lhs, nonAssoc ? lv + 1 : lv, os);
        os << " " << opSymbol(n.op) << " ";
        printTermAt(n.rhs, lv + 1, os);
      });
    }
    void operator()(const Term::App& n) {
      paren(6, [&] {
        printTermAt(n.fn, 6, os);
        os << " ";
        printTermAt(n.arg, 7, os);
      });
    }
    void operator()(const Term::Abs& n) {
      paren(0, [&] {
        os << "fun " << n.param << ":" << showType(n.paramType) << " => ";
        printTermAt(n.body, 0, os);
      });
    }
    void operator()(const Term::Fix& n) {
      paren(0, [&] {
        os << "mu (" << n.param << ":" << showType(n.paramType) << "). ";
        printTermAt(n.body, 0, os);
      });
    }
    void operator()(const Term::If& n) {
      paren(0, [&] {
        os << "if ";
        printTermAt(n.cond, 0, os);
        os << " then ";
        printTermAt(n.thenBranch, 0, os);
        os << " else ";
        printTermAt(n.elseBranch, 0, os);
      });
    }
    void operator()(const Term::MonC& n) {
      os << "mon^" << n.label << "(";
      printContractAt(n.contract, os);
      os << ", ";
      printTermAt(n.subject, 0, os);
      os << ")";
    }
    void operator()(const Term::MonE& n) {
      // Distinguished runtime-only form; not re-parseable as source.
      os << "mon{";
      printLabeledAt(n.labeled, os);
      os << ", ";
      printTermAt(n.subject, 0, os);
      os << "}";
    }
  };
  V v{level, os};
  std::visit(v, e->node);
}

}  // namespace

std::string printTerm(const TermPtr& e) {
  std::ostringstream os;
  printTermAt(e, 0, os);
  return os.str();
}

std::string printContract(const ContractPtr& c) {
  std::ostringstream os;
  printContractAt(c, os);
  return os.str();
}

std::string printLabeled(const LabeledPtr& c) {
  std::ostringstream os;
  printLabeledAt(c, os);
  return os.str();
}

std::string printType(const TypePtr& t) { return showType(t); }

}  // namespace cpcf

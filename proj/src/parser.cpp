#include "acsolve/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace acsolve {

namespace {

enum class Tok {
  End, Ident, Var, Num, RatNum,
  Dot, Comma, Colon, Pipe, Amp, Plus, Star, Minus, Arrow, At,
  LParen, RParen, LBrack, RBrack, LBrace, RBrace,
  If,  // ":-"
  Cmp  // one of the ten comparison tokens, text payload
};

struct Token {
  Tok kind;
  std::string text;
  Int num;
  Rat rat;
  int line, col;
};

class Lexer {
 public:
  Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipWs();
      Token t = next();
      bool end = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (end) break;
    }
    return out;
  }

 private:
  void skipWs() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        lineStart_ = ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(line_, static_cast<int>(pos_ - lineStart_) + 1, msg);
  }

  Token make(Tok k, std::string text = "") {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.line = tokLine_;
    t.col = tokCol_;
    return t;
  }

  Token next() {
    tokLine_ = line_;
    tokCol_ = static_cast<int>(pos_ - lineStart_) + 1;
    if (pos_ >= src_.size()) return make(Tok::End);
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return lexNumber();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lexWord();
    ++pos_;
    switch (c) {
      case '.': return make(Tok::Dot);
      case ',': return make(Tok::Comma);
      case ';': return make(Tok::Comma);  // ';' and ',' both separate
      case '(': return make(Tok::LParen);
      case ')': return make(Tok::RParen);
      case '[': return make(Tok::LBrack);
      case ']': return make(Tok::RBrack);
      case '{': return make(Tok::LBrace);
      case '}': return make(Tok::RBrace);
      case '|': return make(Tok::Pipe);
      case '&': return make(Tok::Amp);
      case '+': return make(Tok::Plus);
      case '*': return make(Tok::Star);
      case '@': return make(Tok::At);
      case '-':
        if (peek() == '>') {
          ++pos_;
          return make(Tok::Arrow);
        }
        return make(Tok::Minus);
      case ':':
        if (peek() == '-') {
          ++pos_;
          return make(Tok::If);
        }
        return make(Tok::Colon);
      case '=': return make(Tok::Cmp, "=");
      case '<':
        if (peek() == '=') {
          ++pos_;
          return make(Tok::Cmp, "<=");
        }
        return make(Tok::Cmp, "<");
      case '>':
        if (peek() == '=') {
          ++pos_;
          return make(Tok::Cmp, ">=");
        }
        return make(Tok::Cmp, ">");
      case '!': {
        std::string op = "!";
        if (peek() == '=') {
          ++pos_;
          op += '=';
        } else if (peek() == '<' || peek() == '>') {
          op += src_[pos_++];
          if (peek() == '=') {
            ++pos_;
            op += '=';
          }
        } else {
          fail("stray '!'");
        }
        return make(Tok::Cmp, op);
      }
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  Token lexNumber() {
    size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string digits = src_.substr(start, pos_ - start);
    // a contiguous p/q is a rational literal ('/' is not an operator)
    if (peek() == '/' && pos_ + 1 < src_.size() &&
        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      size_t dstart = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      std::string den = src_.substr(dstart, pos_ - dstart);
      if (Int(den) == 0) fail("zero denominator in rational literal");
      Token t = make(Tok::RatNum);
      t.rat = Rat(Int(digits), Int(den));
      return t;
    }
    Token t = make(Tok::Num);
    t.num = Int(digits);
    return t;
  }

  Token lexWord() {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
            src_[pos_] == '\''))
      ++pos_;
    std::string w = src_.substr(start, pos_ - start);
    if (std::isupper(static_cast<unsigned char>(w[0])) || w[0] == '_')
      return make(Tok::Var, w);
    return make(Tok::Ident, w);
  }

  const std::string& src_;
  size_t pos_ = 0;
  size_t lineStart_ = 0;
  int line_ = 1;
  int tokLine_ = 1, tokCol_ = 1;
};

// A parsed expression that may still be a pure unweighted formula; purity is
// kept as long as possible so `p -> q` stays a formula implication while
// `p(X)*W -> q` becomes a weighted one.
struct PExpr {
  WeightedPtr w;
  FormulaPtr f;  // set iff the expression is a pure sigma-formula

  bool pure() const { return f != nullptr; }
  WeightedPtr weighted() const { return f ? Weighted::embed(f) : w; }
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParseOptions& opts)
      : toks_(std::move(toks)), opts_(opts) {}

  Program program() {
    Program p;
    while (!at(Tok::End)) {
      if (at(Tok::Ident) && cur().text == "domain" && la(1).kind == Tok::LBrace) {
        ++i_;
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
          Token t = expect(Tok::Ident, "constant symbol");
          p.declaredDomain.insert(t.text);
          if (!at(Tok::RBrace)) expect(Tok::Comma, "','");
        }
        expect(Tok::RBrace, "'}'");
        expect(Tok::Dot, "'.'");
        continue;
      }
      p.rules.push_back(rule());
    }
    checkArities(p);
    classifyVariables(p);
    return p;
  }

  std::vector<Atom> facts() {
    std::vector<Atom> out;
    while (!at(Tok::End)) {
      Atom a = atom();
      if (!a.ground()) err("edb facts must be ground");
      out.push_back(std::move(a));
      expect(Tok::Dot, "'.'");
    }
    return out;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& la(size_t k) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++i_;
    return true;
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) err("expected " + what);
    return toks_[i_++];
  }
  [[noreturn]] void err(const std::string& msg) const {
    throw ParseError(cur().line, cur().col, msg);
  }

  // ---- rules -------------------------------------------------------------

  Rule rule() {
    Rule r;
    if (at(Tok::If)) {
      r.head = Head::bottom();
    } else {
      r.head = head();
    }
    if (accept(Tok::If)) {
      if (!at(Tok::Dot)) {
        r.body.push_back(literal());
        while (accept(Tok::Comma)) r.body.push_back(literal());
      }
    }
    expect(Tok::Dot, "'.' at end of rule");
    return r;
  }

  Head head() {
    if (at(Tok::Ident) && cur().text == "bot") {
      ++i_;
      return Head::bottom();
    }
    if (startsConstraintLhs()) {
      auto c = constraint(/*headPosition=*/true);
      return Head::ofConstraint(std::move(c));
    }
    Atom first = atom();
    if (!at(Tok::Pipe)) return Head::ofAtom(std::move(first));
    std::vector<Atom> as{std::move(first)};
    while (accept(Tok::Pipe)) as.push_back(atom());
    return Head::ofDisjunction(std::move(as));
  }

  Literal literal() {
    Literal l;
    if (at(Tok::Ident) && cur().text == "not") {
      ++i_;
      l.negated = true;
    }
    if (startsConstraintLhs()) {
      // `LHS CMP ...`: constraint or aggregate literal
      Term lhs = termForConstraintLhs();
      Token op = expect(Tok::Cmp, "comparison operator");
      auto cmp = cmpFromToken(op.text);
      if (!cmp) err("unknown comparison '" + op.text + "'");
      if (at(Tok::Ident) && isAggKeyword(cur().text) &&
          (la(1).kind == Tok::LBrace || la(1).kind == Tok::LBrack)) {
        if (l.negated) err("aggregates cannot be negated");
        l.agg = aggregate(std::move(lhs), *cmp);
        return l;
      }
      l.cons = constraintTail(std::move(lhs), *cmp, /*headPosition=*/false, op);
      return l;
    }
    l.atom = atom();
    return l;
  }

  bool isAggKeyword(const std::string& s) const {
    return s == "sum" || s == "count" || s == "max" || s == "min" || s == "times" ||
           s == "avg";
  }

  // Constraint left-hand sides are values or variables, never constant
  // symbols, so one token of lookahead decides.
  bool startsConstraintLhs() const {
    switch (cur().kind) {
      case Tok::Num:
      case Tok::RatNum:
      case Tok::LBrace:
        return true;
      case Tok::Minus:
        return la(1).kind == Tok::Num || la(1).kind == Tok::RatNum ||
               (la(1).kind == Tok::Ident && la(1).text == "inf");
      case Tok::Ident:
        return cur().text == "inf" && la(1).kind == Tok::Cmp;
      case Tok::Var:
        return la(1).kind == Tok::Cmp;
      default:
        return false;
    }
  }

  Term termForConstraintLhs() {
    if (at(Tok::Var)) {
      checkVarName(cur().text);
      return Term::var(toks_[i_++].text);
    }
    return Term::value(valueLiteral());
  }

  Value valueLiteral() {
    bool negated = accept(Tok::Minus);
    if (at(Tok::Num)) {
      Int v = toks_[i_++].num;
      return Value::ofInt(negated ? Int(-v) : v);
    }
    if (at(Tok::RatNum)) {
      Rat v = toks_[i_++].rat;
      return Value::ofRat(negated ? Rat(-v) : v);
    }
    if (at(Tok::Ident) && cur().text == "inf") {
      ++i_;
      return negated ? Value::negInf() : Value::posInf();
    }
    if (!negated && at(Tok::LBrace)) {
      ++i_;
      SymbolSet syms;
      while (!at(Tok::RBrace)) {
        syms.insert(expect(Tok::Ident, "symbol").text);
        if (!at(Tok::RBrace)) expect(Tok::Comma, "','");
      }
      expect(Tok::RBrace, "'}'");
      return Value::ofSet(std::move(syms));
    }
    err("expected value literal");
  }

  ConstraintPtr constraint(bool headPosition) {
    Term lhs = termForConstraintLhs();
    Token op = expect(Tok::Cmp, "comparison operator");
    auto cmp = cmpFromToken(op.text);
    if (!cmp) err("unknown comparison '" + op.text + "'");
    return constraintTail(std::move(lhs), *cmp, headPosition, op);
  }

  ConstraintPtr constraintTail(Term lhs, CmpOp cmp, bool headPosition, const Token& op) {
    auto c = std::make_shared<AlgebraicConstraint>();
    c->lhs = std::move(lhs);
    c->cmp = cmp;
    if (at(Tok::Ident) && cur().text == "c" && la(1).kind == Tok::LBrack) {
      ++i_;
      c->choice = true;
      if (!headPosition)
        throw ParseError(op.line, op.col, "choice marker 'c' is only allowed in rule heads");
    }
    expect(Tok::LBrack, "'[' before semiring name");
    c->ringSpec = ringSpec();
    c->ring = lookupSemiring(c->ringSpec);
    if (!c->ring) err("unknown semiring '" + c->ringSpec + "'");
    expect(Tok::RBrack, "']'");
    expect(Tok::LBrace, "'{'");
    ringStack_.push_back(c->ring);
    PExpr e = wexpr();
    ringStack_.pop_back();
    expect(Tok::RBrace, "'}'");
    c->body = e.weighted();
    if (c->lhs.isValue()) {
      auto cv = c->ring->coerce(c->lhs.val());
      if (!cv)
        throw ParseError(op.line, op.col,
                         "constraint bound " + c->lhs.val().str() +
                             " is outside the carrier of '" + c->ringSpec + "'");
      c->lhs = Term::value(*cv);
    }
    return c;
  }

  std::string ringSpec() {
    Token t = expect(Tok::Ident, "semiring name");
    std::string spec = t.text;
    if (accept(Tok::Minus)) {
      // nat-inf
      spec += "-" + expect(Tok::Ident, "semiring name").text;
    }
    if (spec == "pset") {
      expect(Tok::Colon, "':' after pset");
      spec += ":";
      bool first = true;
      while (at(Tok::Ident)) {
        if (!first) spec += ",";
        spec += toks_[i_++].text;
        first = false;
        if (!accept(Tok::Comma)) break;
      }
    }
    return spec;
  }

  Aggregate aggregate(Term bound, CmpOp cmp) {
    Aggregate agg;
    agg.bound = std::move(bound);
    agg.cmp = cmp;
    std::string kw = expect(Tok::Ident, "aggregate kind").text;
    if (kw == "sum") agg.kind = AggKind::Sum;
    else if (kw == "count") agg.kind = AggKind::Count;
    else if (kw == "max") agg.kind = AggKind::Max;
    else if (kw == "min") agg.kind = AggKind::Min;
    else if (kw == "times") agg.kind = AggKind::Times;
    else if (kw == "avg") agg.kind = AggKind::Avg;
    else err("unknown aggregate '" + kw + "'");
    if (accept(Tok::LBrack)) {
      agg.ringSpec = ringSpec();
      expect(Tok::RBrack, "']'");
    }
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      AggElement el;
      if (agg.kind == AggKind::Count) {
        el.atom = atom();
      } else {
        el.weight = term();
        expect(Tok::Colon, "':' in aggregate element");
        el.atom = atom();
      }
      agg.elems.push_back(std::move(el));
      if (!at(Tok::RBrace)) expect(Tok::Comma, "','");
    }
    expect(Tok::RBrace, "'}'");
    if (agg.elems.empty()) err("empty aggregate");
    return agg;
  }

  // ---- atoms and terms ---------------------------------------------------

  Atom atom() {
    Token t = expect(Tok::Ident, "predicate symbol");
    if (t.text == "not" || t.text == "bot" || t.text == "inf" || t.text == "inv")
      throw ParseError(t.line, t.col, "'" + t.text + "' is reserved");
    Atom a;
    a.pred = t.text;
    if (accept(Tok::LParen)) {
      if (at(Tok::RParen)) err("empty argument list");
      a.args.push_back(term());
      while (accept(Tok::Comma)) a.args.push_back(term());
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  Term term() {
    if (at(Tok::Var)) {
      checkVarName(cur().text);
      return Term::var(toks_[i_++].text);
    }
    if (at(Tok::Ident) && cur().text != "inf") {
      return Term::constant(toks_[i_++].text);
    }
    return Term::value(valueLiteral());
  }

  void checkVarName(const std::string& name) {
    if (!opts_.allowInternalNames && name[0] == '_')
      err("variable names starting with '_' are reserved");
  }

  // ---- weighted expressions ----------------------------------------------
  //
  // precedence: ->  <  +  <  *  <  |  <  &  <  unary (not, -, inv)
  // '|' and '&' apply to pure formulas only; '->' stays a formula implication
  // when both sides are pure.

  PExpr wexpr(bool noBareOr = false) { return wimplies(noBareOr); }

  PExpr wimplies(bool noBareOr) {
    PExpr lhs = wplus(noBareOr);
    if (!at(Tok::Arrow)) return lhs;
    ++i_;
    PExpr rhs = wimplies(noBareOr);
    if (lhs.pure() && rhs.pure())
      return PExpr{nullptr, Formula::implies(lhs.f, rhs.f)};
    return PExpr{Weighted::implies(lhs.weighted(), rhs.weighted()), nullptr};
  }

  PExpr wplus(bool noBareOr) {
    PExpr lhs = wtimes(noBareOr);
    while (at(Tok::Plus)) {
      ++i_;
      PExpr rhs = wtimes(noBareOr);
      lhs = PExpr{Weighted::plus(lhs.weighted(), rhs.weighted()), nullptr};
    }
    return lhs;
  }

  PExpr wtimes(bool noBareOr) {
    PExpr lhs = forExpr(noBareOr);
    while (at(Tok::Star)) {
      ++i_;
      PExpr rhs = forExpr(noBareOr);
      lhs = PExpr{Weighted::times(lhs.weighted(), rhs.weighted()), nullptr};
    }
    return lhs;
  }

  PExpr forExpr(bool noBareOr) {
    PExpr lhs = fandExpr();
    while (!noBareOr && at(Tok::Pipe) && lhs.pure()) {
      ++i_;
      PExpr rhs = fandExpr();
      if (!rhs.pure()) err("'|' requires formulas on both sides");
      lhs = PExpr{nullptr, Formula::disj(lhs.f, rhs.f)};
    }
    return lhs;
  }

  PExpr fandExpr() {
    PExpr lhs = wunary();
    while (at(Tok::Amp)) {
      if (!lhs.pure()) err("'&' requires formulas on both sides");
      ++i_;
      PExpr rhs = wunary();
      if (!rhs.pure()) err("'&' requires formulas on both sides");
      lhs = PExpr{nullptr, Formula::conj(lhs.f, rhs.f)};
    }
    return lhs;
  }

  PExpr wunary() {
    if (at(Tok::Ident) && cur().text == "not") {
      ++i_;
      PExpr e = wunary();
      if (!e.pure()) err("'not' applies to formulas");
      return PExpr{nullptr, Formula::negate(e.f)};
    }
    if (at(Tok::Minus)) {
      // fold a leading minus into numeric literals so that maxtrop values
      // like -5 and -inf need no additive inverse
      if (la(1).kind == Tok::Num || la(1).kind == Tok::RatNum ||
          (la(1).kind == Tok::Ident && la(1).text == "inf")) {
        return PExpr{Weighted::constant(coerceConst(valueLiteral())), nullptr};
      }
      ++i_;
      PExpr e = wunary();
      return PExpr{Weighted::neg(e.weighted()), nullptr};
    }
    if (at(Tok::Ident) && cur().text == "inv" && la(1).kind == Tok::LParen) {
      i_ += 2;
      PExpr e = wexpr();
      expect(Tok::RParen, "')'");
      return PExpr{Weighted::inv(e.weighted()), nullptr};
    }
    return wprimary();
  }

  Value coerceConst(const Value& v) {
    const Semiring* ring = ringStack_.empty() ? nullptr : ringStack_.back();
    if (!ring) return v;
    auto c = ring->coerce(v);
    if (!c)
      err("value " + v.str() + " is outside the carrier of '" + ring->name() + "'");
    return *c;
  }

  PExpr wprimary() {
    switch (cur().kind) {
      case Tok::Num:
      case Tok::RatNum:
        return PExpr{Weighted::constant(coerceConst(valueLiteral())), nullptr};
      case Tok::LBrace:
        return PExpr{Weighted::constant(coerceConst(valueLiteral())), nullptr};
      case Tok::Var: {
        checkVarName(cur().text);
        return PExpr{Weighted::var(toks_[i_++].text), nullptr};
      }
      case Tok::Ident: {
        const std::string& w = cur().text;
        if (w == "bot") {
          ++i_;
          return PExpr{nullptr, Formula::bottom()};
        }
        if (w == "inf") return PExpr{Weighted::constant(coerceConst(valueLiteral())), nullptr};
        return PExpr{nullptr, Formula::atomic(atom())};
      }
      case Tok::LParen: {
        // conditional `(s1 | s2 : phi)@mode` or a parenthesised expression
        size_t save = i_;
        if (auto cond = tryConditional()) return PExpr{*cond, nullptr};
        i_ = save;
        ++i_;
        PExpr e = wexpr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        err("expected weighted expression");
    }
  }

  std::optional<WeightedPtr> tryConditional() {
    try {
      expect(Tok::LParen, "'('");
      PExpr s1 = wexpr(/*noBareOr=*/true);
      if (!at(Tok::Pipe)) return std::nullopt;
      ++i_;
      PExpr s2 = wexpr(/*noBareOr=*/true);
      if (!at(Tok::Colon)) return std::nullopt;
      ++i_;
      PExpr phi = wexpr();
      if (!phi.pure()) return std::nullopt;
      if (!at(Tok::RParen)) return std::nullopt;
      ++i_;
      if (!at(Tok::At)) return std::nullopt;
      ++i_;
      Token m = expect(Tok::Ident, "conditional mode");
      CondMode mode;
      if (m.text == "alt") mode = CondMode::Alt;
      else if (m.text == "vc") mode = CondMode::Vc;
      else if (m.text == "df") mode = CondMode::Df;
      else return std::nullopt;
      return Weighted::conditional(s1.weighted(), s2.weighted(), phi.f, mode);
    } catch (const ParseError&) {
      return std::nullopt;
    }
  }

  // ---- consistency checks --------------------------------------------------

  void checkAritiesAtom(const Atom& a, std::map<std::string, size_t>& arity) {
    auto [it, fresh] = arity.emplace(a.pred, a.args.size());
    if (!fresh && it->second != a.args.size())
      throw ParseError(1, 1,
                       "predicate '" + a.pred + "' used with arity " +
                           std::to_string(a.args.size()) + " and " +
                           std::to_string(it->second));
  }

  void checkAritiesFormula(const FormulaPtr& f, std::map<std::string, size_t>& arity) {
    if (!f) return;
    if (f->kind == Formula::Kind::Atomic) checkAritiesAtom(f->atom, arity);
    checkAritiesFormula(f->lhs, arity);
    checkAritiesFormula(f->rhs, arity);
  }

  void checkAritiesWeighted(const WeightedPtr& w, std::map<std::string, size_t>& arity) {
    if (!w) return;
    if (w->kind == Weighted::Kind::Embed || w->kind == Weighted::Kind::Conditional)
      checkAritiesFormula(w->phi, arity);
    checkAritiesWeighted(w->lhs, arity);
    checkAritiesWeighted(w->rhs, arity);
  }

  void checkArities(const Program& p) {
    std::map<std::string, size_t> arity;
    for (const auto& r : p.rules) {
      if (r.head.kind == Head::Kind::Atom) checkAritiesAtom(*r.head.atom, arity);
      if (r.head.kind == Head::Kind::Constraint)
        checkAritiesWeighted(r.head.cons->body, arity);
      if (r.head.kind == Head::Kind::Disjunction)
        for (const auto& a : r.head.disj) checkAritiesAtom(a, arity);
      for (const auto& lit : r.body) {
        if (lit.isAtom()) checkAritiesAtom(*lit.atom, arity);
        if (lit.isConstraint()) checkAritiesWeighted(lit.cons->body, arity);
        if (lit.isAggregate())
          for (const auto& e : lit.agg->elems) checkAritiesAtom(e.atom, arity);
      }
    }
  }

  std::vector<Token> toks_;
  size_t i_ = 0;
  ParseOptions opts_;
  std::vector<const Semiring*> ringStack_;
};

}  // namespace

Program parseProgram(const std::string& text, const ParseOptions& opts) {
  Parser p(Lexer(text).run(), opts);
  return p.program();
}

std::vector<Atom> parseFacts(const std::string& text) {
  Parser p(Lexer(text).run(), ParseOptions{});
  return p.facts();
}

}  // namespace acsolve

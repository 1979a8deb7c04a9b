#include "acsolve/ast.hpp"

#include <algorithm>
#include <sstream>

namespace acsolve {

std::string Term::str() const {
  switch (kind_) {
    case Kind::Constant:
    case Kind::Var:
      return name_;
    case Kind::Value:
      return val_.str();
  }
  return "?";
}

std::string Atom::str() const {
  if (args.empty()) return pred;
  std::string s = pred + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += args[i].str();
  }
  return s + ")";
}

struct FormulaFactory {
  static FormulaPtr make() { return FormulaPtr(new Formula()); }
};

FormulaPtr Formula::bottom() {
  static FormulaPtr instance = FormulaFactory::make();
  return instance;
}

FormulaPtr Formula::atomic(Atom a) {
  auto f = FormulaFactory::make();
  auto* m = const_cast<Formula*>(f.get());
  m->kind = Kind::Atomic;
  m->atom = std::move(a);
  return f;
}

FormulaPtr Formula::constraint(ConstraintPtr c) {
  auto f = FormulaFactory::make();
  auto* m = const_cast<Formula*>(f.get());
  m->kind = Kind::Constraint;
  m->cons = std::move(c);
  return f;
}

static FormulaPtr binary(Formula::Kind k, FormulaPtr l, FormulaPtr r) {
  auto f = FormulaFactory::make();
  auto* m = const_cast<Formula*>(f.get());
  m->kind = k;
  m->lhs = std::move(l);
  m->rhs = std::move(r);
  return f;
}

FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
  return binary(Kind::And, std::move(l), std::move(r));
}
FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
  return binary(Kind::Or, std::move(l), std::move(r));
}
FormulaPtr Formula::implies(FormulaPtr l, FormulaPtr r) {
  return binary(Kind::Implies, std::move(l), std::move(r));
}

struct WeightedFactory {
  static WeightedPtr make() { return WeightedPtr(new Weighted()); }
};

static Weighted* mut(const WeightedPtr& p) { return const_cast<Weighted*>(p.get()); }

WeightedPtr Weighted::constant(Value v) {
  auto w = WeightedFactory::make();
  mut(w)->kind = Kind::Const;
  mut(w)->k = std::move(v);
  return w;
}
WeightedPtr Weighted::var(std::string name) {
  auto w = WeightedFactory::make();
  mut(w)->kind = Kind::Var;
  mut(w)->boundVar = std::move(name);
  return w;
}
WeightedPtr Weighted::embed(FormulaPtr f) {
  auto w = WeightedFactory::make();
  mut(w)->kind = Kind::Embed;
  mut(w)->phi = std::move(f);
  return w;
}
static WeightedPtr wbinary(Weighted::Kind k, WeightedPtr l, WeightedPtr r) {
  auto w = WeightedFactory::make();
  mut(w)->kind = k;
  mut(w)->lhs = std::move(l);
  mut(w)->rhs = std::move(r);
  return w;
}
WeightedPtr Weighted::implies(WeightedPtr l, WeightedPtr r) {
  return wbinary(Kind::Implies, std::move(l), std::move(r));
}
WeightedPtr Weighted::plus(WeightedPtr l, WeightedPtr r) {
  return wbinary(Kind::Plus, std::move(l), std::move(r));
}
WeightedPtr Weighted::times(WeightedPtr l, WeightedPtr r) {
  return wbinary(Kind::Times, std::move(l), std::move(r));
}
WeightedPtr Weighted::neg(WeightedPtr x) { return wbinary(Kind::Neg, std::move(x), nullptr); }
WeightedPtr Weighted::inv(WeightedPtr x) { return wbinary(Kind::Inv, std::move(x), nullptr); }
WeightedPtr Weighted::sum(std::string v, WeightedPtr body) {
  auto w = wbinary(Kind::Sum, std::move(body), nullptr);
  mut(w)->boundVar = std::move(v);
  return w;
}
WeightedPtr Weighted::prod(std::string v, WeightedPtr body) {
  auto w = wbinary(Kind::Prod, std::move(body), nullptr);
  mut(w)->boundVar = std::move(v);
  return w;
}
WeightedPtr Weighted::conditional(WeightedPtr thenW, WeightedPtr elseW, FormulaPtr cond,
                                  CondMode mode) {
  auto w = wbinary(Kind::Conditional, std::move(thenW), std::move(elseW));
  mut(w)->phi = std::move(cond);
  mut(w)->mode = mode;
  return w;
}

void collectVars(const Term& t, std::set<std::string>& out) {
  if (t.isVar()) out.insert(t.name());
}

void collectVars(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args) collectVars(t, out);
}

void collectVars(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == Formula::Kind::Atomic) collectVars(f->atom, out);
  if (f->kind == Formula::Kind::Constraint) {
    collectVars(f->cons->lhs, out);
    collectVars(f->cons->body, out);
  }
  collectVars(f->lhs, out);
  collectVars(f->rhs, out);
}

void collectVars(const WeightedPtr& w, std::set<std::string>& out) {
  if (!w) return;
  switch (w->kind) {
    case Weighted::Kind::Const:
      return;
    case Weighted::Kind::Var:
      out.insert(w->boundVar);
      return;
    case Weighted::Kind::Embed:
      collectVars(w->phi, out);
      return;
    case Weighted::Kind::Conditional:
      collectVars(w->phi, out);
      collectVars(w->lhs, out);
      collectVars(w->rhs, out);
      return;
    case Weighted::Kind::Sum:
    case Weighted::Kind::Prod:
      out.insert(w->boundVar);
      collectVars(w->lhs, out);
      return;
    default:
      collectVars(w->lhs, out);
      collectVars(w->rhs, out);
      return;
  }
}

void freeVars(const WeightedPtr& w, std::set<std::string>& out) {
  if (!w) return;
  if (w->kind == Weighted::Kind::Sum || w->kind == Weighted::Kind::Prod) {
    std::set<std::string> inner;
    freeVars(w->lhs, inner);
    inner.erase(w->boundVar);
    out.insert(inner.begin(), inner.end());
    return;
  }
  if (w->kind == Weighted::Kind::Var) {
    out.insert(w->boundVar);
    return;
  }
  if (w->kind == Weighted::Kind::Embed) {
    collectVars(w->phi, out);
    return;
  }
  if (w->kind == Weighted::Kind::Conditional) {
    collectVars(w->phi, out);
    freeVars(w->lhs, out);
    freeVars(w->rhs, out);
    return;
  }
  freeVars(w->lhs, out);
  freeVars(w->rhs, out);
}

namespace {

// Occurrences of variables split into weighted-formula positions and
// everything else (atom arguments, constraint left-hand sides).
void scanLiteralVars(const Literal& lit, std::set<std::string>& weighted,
                     std::set<std::string>& outside) {
  if (lit.isAtom()) {
    collectVars(*lit.atom, outside);
  } else if (lit.isConstraint()) {
    collectVars(lit.cons->lhs, outside);
    collectVars(lit.cons->body, weighted);
  } else if (lit.isAggregate()) {
    collectVars(lit.agg->bound, outside);
    for (const auto& e : lit.agg->elems) {
      if (e.weight) collectVars(*e.weight, weighted);
      collectVars(e.atom, weighted);
    }
  }
}

void scanHeadVars(const Head& h, std::set<std::string>& weighted,
                  std::set<std::string>& outside) {
  switch (h.kind) {
    case Head::Kind::Bottom:
      return;
    case Head::Kind::Atom:
      collectVars(*h.atom, outside);
      return;
    case Head::Kind::Constraint:
      collectVars(h.cons->lhs, outside);
      collectVars(h.cons->body, weighted);
      return;
    case Head::Kind::Disjunction:
      for (const auto& a : h.disj) collectVars(a, outside);
      return;
  }
}

}  // namespace

void classifyVariables(Rule& r) {
  std::set<std::string> weighted, outside;
  scanHeadVars(r.head, weighted, outside);
  for (const auto& lit : r.body) scanLiteralVars(lit, weighted, outside);
  r.globals = outside;
  r.locals.clear();
  for (const auto& v : weighted)
    if (!outside.count(v)) r.locals.insert(v);
}

void classifyVariables(Program& p) {
  for (auto& r : p.rules) classifyVariables(r);
}

namespace {

void firstOccurrenceOrder(const WeightedPtr& w, const std::set<std::string>& wanted,
                          std::vector<std::string>& order, std::set<std::string>& seen) {
  if (!w) return;
  switch (w->kind) {
    case Weighted::Kind::Var:
      if (wanted.count(w->boundVar) && !seen.count(w->boundVar)) {
        seen.insert(w->boundVar);
        order.push_back(w->boundVar);
      }
      return;
    case Weighted::Kind::Embed: {
      std::set<std::string> vs;
      collectVars(w->phi, vs);
      // stable order within a formula: walk atoms left to right
      std::vector<const Formula*> stack{w->phi.get()};
      while (!stack.empty()) {
        const Formula* f = stack.back();
        stack.pop_back();
        if (!f) continue;
        if (f->kind == Formula::Kind::Atomic) {
          for (const auto& t : f->atom.args)
            if (t.isVar() && wanted.count(t.name()) && !seen.count(t.name())) {
              seen.insert(t.name());
              order.push_back(t.name());
            }
        } else {
          stack.push_back(f->rhs.get());
          stack.push_back(f->lhs.get());
        }
      }
      (void)vs;
      return;
    }
    case Weighted::Kind::Sum:
    case Weighted::Kind::Prod:
      firstOccurrenceOrder(w->lhs, wanted, order, seen);
      return;
    default:
      firstOccurrenceOrder(w->lhs, wanted, order, seen);
      firstOccurrenceOrder(w->rhs, wanted, order, seen);
      return;
  }
}

WeightedPtr closeFormula(const WeightedPtr& body, const std::set<std::string>& locals) {
  std::set<std::string> fv;
  freeVars(body, fv);
  std::set<std::string> toBind;
  for (const auto& v : fv)
    if (locals.count(v)) toBind.insert(v);
  if (toBind.empty()) return body;
  std::vector<std::string> order;
  std::set<std::string> seen;
  firstOccurrenceOrder(body, toBind, order, seen);
  WeightedPtr w = body;
  for (auto it = order.rbegin(); it != order.rend(); ++it) w = Weighted::sum(*it, w);
  return w;
}

ConstraintPtr closeConstraint(const ConstraintPtr& c, const std::set<std::string>& locals) {
  auto n = std::make_shared<AlgebraicConstraint>(*c);
  n->body = closeFormula(c->body, locals);
  return n;
}

}  // namespace

Rule sigmaClosure(const Rule& r) {
  Rule out = r;
  if (out.head.kind == Head::Kind::Constraint)
    out.head.cons = closeConstraint(out.head.cons, r.locals);
  for (auto& lit : out.body)
    if (lit.isConstraint()) lit.cons = closeConstraint(lit.cons, r.locals);
  return out;
}

namespace {

void sortScanWeighted(const WeightedPtr& w, const Semiring* ring,
                      std::map<std::string, std::vector<const Semiring*>>& sorts) {
  if (!w) return;
  switch (w->kind) {
    case Weighted::Kind::Var: {
      auto& v = sorts[w->boundVar];
      if (std::find(v.begin(), v.end(), ring) == v.end()) v.push_back(ring);
      return;
    }
    case Weighted::Kind::Embed: {
      std::set<std::string> vs;
      collectVars(w->phi, vs);
      for (const auto& x : vs) sorts.try_emplace(x);
      return;
    }
    case Weighted::Kind::Conditional: {
      std::set<std::string> vs;
      collectVars(w->phi, vs);
      for (const auto& x : vs) sorts.try_emplace(x);
      sortScanWeighted(w->lhs, ring, sorts);
      sortScanWeighted(w->rhs, ring, sorts);
      return;
    }
    default:
      sortScanWeighted(w->lhs, ring, sorts);
      sortScanWeighted(w->rhs, ring, sorts);
      return;
  }
}

void sortScanConstraint(const AlgebraicConstraint& c,
                        std::map<std::string, std::vector<const Semiring*>>& sorts) {
  if (c.lhs.isVar()) {
    auto& v = sorts[c.lhs.name()];
    if (std::find(v.begin(), v.end(), c.ring) == v.end()) v.push_back(c.ring);
  }
  sortScanWeighted(c.body, c.ring, sorts);
}

}  // namespace

std::map<std::string, std::vector<const Semiring*>> variableSorts(const Rule& r) {
  std::map<std::string, std::vector<const Semiring*>> sorts;
  auto scanAtom = [&sorts](const Atom& a) {
    for (const auto& t : a.args)
      if (t.isVar()) sorts.try_emplace(t.name());
  };
  switch (r.head.kind) {
    case Head::Kind::Atom:
      scanAtom(*r.head.atom);
      break;
    case Head::Kind::Constraint:
      sortScanConstraint(*r.head.cons, sorts);
      break;
    case Head::Kind::Disjunction:
      for (const auto& a : r.head.disj) scanAtom(a);
      break;
    default:
      break;
  }
  for (const auto& lit : r.body) {
    if (lit.isAtom())
      scanAtom(*lit.atom);
    else if (lit.isConstraint())
      sortScanConstraint(*lit.cons, sorts);
  }
  return sorts;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == Formula::Kind::Atomic) return a->atom == b->atom;
  if (a->kind == Formula::Kind::Constraint) return equal(*a->cons, *b->cons);
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

bool equal(const WeightedPtr& a, const WeightedPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Weighted::Kind::Const:
      return a->k == b->k;
    case Weighted::Kind::Var:
      return a->boundVar == b->boundVar;
    case Weighted::Kind::Embed:
      return equal(a->phi, b->phi);
    case Weighted::Kind::Sum:
    case Weighted::Kind::Prod:
      return a->boundVar == b->boundVar && equal(a->lhs, b->lhs);
    case Weighted::Kind::Conditional:
      return a->mode == b->mode && equal(a->phi, b->phi) && equal(a->lhs, b->lhs) &&
             equal(a->rhs, b->rhs);
    default:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

bool equal(const AlgebraicConstraint& a, const AlgebraicConstraint& b) {
  return a.lhs == b.lhs && a.cmp == b.cmp && a.ring == b.ring && a.choice == b.choice &&
         equal(a.body, b.body);
}

static bool equalLit(const Literal& a, const Literal& b) {
  if (a.negated != b.negated) return false;
  if (a.isAtom() != b.isAtom() || a.isConstraint() != b.isConstraint() ||
      a.isAggregate() != b.isAggregate())
    return false;
  if (a.isAtom()) return *a.atom == *b.atom;
  if (a.isConstraint()) return equal(*a.cons, *b.cons);
  const Aggregate& x = *a.agg;
  const Aggregate& y = *b.agg;
  if (!(x.bound == y.bound) || x.cmp != y.cmp || x.kind != y.kind || x.ringSpec != y.ringSpec ||
      x.elems.size() != y.elems.size())
    return false;
  for (size_t i = 0; i < x.elems.size(); ++i) {
    if (x.elems[i].weight != y.elems[i].weight) return false;
    if (!(x.elems[i].atom == y.elems[i].atom)) return false;
  }
  return true;
}

bool equal(const Rule& a, const Rule& b) {
  if (a.head.kind != b.head.kind) return false;
  switch (a.head.kind) {
    case Head::Kind::Atom:
      if (!(*a.head.atom == *b.head.atom)) return false;
      break;
    case Head::Kind::Constraint:
      if (!equal(*a.head.cons, *b.head.cons)) return false;
      break;
    case Head::Kind::Disjunction:
      if (a.head.disj != b.head.disj) return false;
      break;
    default:
      break;
  }
  if (a.body.size() != b.body.size()) return false;
  for (size_t i = 0; i < a.body.size(); ++i)
    if (!equalLit(a.body[i], b.body[i])) return false;
  return true;
}

bool equal(const Program& a, const Program& b) {
  if (a.declaredDomain != b.declaredDomain) return false;
  if (a.rules.size() != b.rules.size()) return false;
  for (size_t i = 0; i < a.rules.size(); ++i)
    if (!equal(a.rules[i], b.rules[i])) return false;
  return true;
}

Term substitute(const Term& t, const Subst& s) {
  if (!t.isVar()) return t;
  auto it = s.find(t.name());
  return it == s.end() ? t : it->second;
}

Atom substitute(const Atom& a, const Subst& s) {
  Atom out;
  out.pred = a.pred;
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(substitute(t, s));
  return out;
}

FormulaPtr substitute(const FormulaPtr& f, const Subst& s) {
  if (!f) return f;
  switch (f->kind) {
    case Formula::Kind::Bottom:
      return f;
    case Formula::Kind::Constraint:
      return Formula::constraint(substitute(f->cons, s));
    case Formula::Kind::Atomic:
      return Formula::atomic(substitute(f->atom, s));
    case Formula::Kind::And:
      return Formula::conj(substitute(f->lhs, s), substitute(f->rhs, s));
    case Formula::Kind::Or:
      return Formula::disj(substitute(f->lhs, s), substitute(f->rhs, s));
    case Formula::Kind::Implies:
      return Formula::implies(substitute(f->lhs, s), substitute(f->rhs, s));
  }
  return f;
}

WeightedPtr substitute(const WeightedPtr& w, const Subst& s) {
  if (!w) return w;
  switch (w->kind) {
    case Weighted::Kind::Const:
      return w;
    case Weighted::Kind::Var: {
      auto it = s.find(w->boundVar);
      if (it == s.end()) return w;
      const Term& t = it->second;
      if (t.isValue()) return Weighted::constant(t.val());
      if (t.isVar()) return Weighted::var(t.name());
      throw EvalError("cannot substitute constant symbol '" + t.name() +
                      "' into a semiring value position");
    }
    case Weighted::Kind::Embed:
      return Weighted::embed(substitute(w->phi, s));
    case Weighted::Kind::Implies:
      return Weighted::implies(substitute(w->lhs, s), substitute(w->rhs, s));
    case Weighted::Kind::Plus:
      return Weighted::plus(substitute(w->lhs, s), substitute(w->rhs, s));
    case Weighted::Kind::Times:
      return Weighted::times(substitute(w->lhs, s), substitute(w->rhs, s));
    case Weighted::Kind::Neg:
      return Weighted::neg(substitute(w->lhs, s));
    case Weighted::Kind::Inv:
      return Weighted::inv(substitute(w->lhs, s));
    case Weighted::Kind::Sum:
    case Weighted::Kind::Prod: {
      Subst inner = s;
      inner.erase(w->boundVar);
      auto body = substitute(w->lhs, inner);
      return w->kind == Weighted::Kind::Sum ? Weighted::sum(w->boundVar, body)
                                            : Weighted::prod(w->boundVar, body);
    }
    case Weighted::Kind::Conditional:
      return Weighted::conditional(substitute(w->lhs, s), substitute(w->rhs, s),
                                   substitute(w->phi, s), w->mode);
  }
  return w;
}

ConstraintPtr substitute(const ConstraintPtr& c, const Subst& s) {
  auto n = std::make_shared<AlgebraicConstraint>(*c);
  n->lhs = substitute(c->lhs, s);
  n->body = substitute(c->body, s);
  return n;
}

Rule substitute(const Rule& r, const Subst& s) {
  Rule out;
  switch (r.head.kind) {
    case Head::Kind::Bottom:
      out.head = Head::bottom();
      break;
    case Head::Kind::Atom:
      out.head = Head::ofAtom(substitute(*r.head.atom, s));
      break;
    case Head::Kind::Constraint:
      out.head = Head::ofConstraint(substitute(r.head.cons, s));
      break;
    case Head::Kind::Disjunction: {
      std::vector<Atom> as;
      for (const auto& a : r.head.disj) as.push_back(substitute(a, s));
      out.head = Head::ofDisjunction(std::move(as));
      break;
    }
  }
  for (const auto& lit : r.body) {
    Literal l;
    l.negated = lit.negated;
    if (lit.isAtom())
      l.atom = substitute(*lit.atom, s);
    else if (lit.isConstraint())
      l.cons = substitute(lit.cons, s);
    else
      l.agg = lit.agg;  // aggregates are desugared before grounding
    out.body.push_back(std::move(l));
  }
  classifyVariables(out);
  return out;
}

FormulaPtr doubleNegateAtoms(const FormulaPtr& f) {
  if (!f) return f;
  switch (f->kind) {
    case Formula::Kind::Bottom:
      return f;
    case Formula::Kind::Constraint: {
      auto n = std::make_shared<AlgebraicConstraint>(*f->cons);
      n->body = doubleNegateAtoms(f->cons->body);
      return Formula::constraint(ConstraintPtr(std::move(n)));
    }
    case Formula::Kind::Atomic:
      return Formula::negate(Formula::negate(f));
    case Formula::Kind::And:
      return Formula::conj(doubleNegateAtoms(f->lhs), doubleNegateAtoms(f->rhs));
    case Formula::Kind::Or:
      return Formula::disj(doubleNegateAtoms(f->lhs), doubleNegateAtoms(f->rhs));
    case Formula::Kind::Implies:
      return Formula::implies(doubleNegateAtoms(f->lhs), doubleNegateAtoms(f->rhs));
  }
  return f;
}

WeightedPtr doubleNegateAtoms(const WeightedPtr& w) {
  if (!w) return w;
  switch (w->kind) {
    case Weighted::Kind::Const:
    case Weighted::Kind::Var:
      return w;
    case Weighted::Kind::Embed:
      return Weighted::embed(doubleNegateAtoms(w->phi));
    case Weighted::Kind::Implies:
      return Weighted::implies(doubleNegateAtoms(w->lhs), doubleNegateAtoms(w->rhs));
    case Weighted::Kind::Plus:
      return Weighted::plus(doubleNegateAtoms(w->lhs), doubleNegateAtoms(w->rhs));
    case Weighted::Kind::Times:
      return Weighted::times(doubleNegateAtoms(w->lhs), doubleNegateAtoms(w->rhs));
    case Weighted::Kind::Neg:
      return Weighted::neg(doubleNegateAtoms(w->lhs));
    case Weighted::Kind::Inv:
      return Weighted::inv(doubleNegateAtoms(w->lhs));
    case Weighted::Kind::Sum:
      return Weighted::sum(w->boundVar, doubleNegateAtoms(w->lhs));
    case Weighted::Kind::Prod:
      return Weighted::prod(w->boundVar, doubleNegateAtoms(w->lhs));
    case Weighted::Kind::Conditional:
      return Weighted::conditional(doubleNegateAtoms(w->lhs), doubleNegateAtoms(w->rhs),
                                   doubleNegateAtoms(w->phi), w->mode);
  }
  return w;
}

}  // namespace acsolve

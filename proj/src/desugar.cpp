#include "acsolve/desugar.hpp"

#include <map>

namespace acsolve {

std::pair<Rule, Rule> expandChoice(const Rule& r, FreshVars& fresh) {
  if (r.head.kind != Head::Kind::Constraint || !r.head.cons->choice)
    throw EvalError("expandChoice requires a choice-marked head constraint");

  Rule minimized = r;
  auto plain = std::make_shared<AlgebraicConstraint>(*r.head.cons);
  plain->choice = false;
  minimized.head = Head::ofConstraint(std::move(plain));

  Rule companion;
  std::string x = fresh.next();
  auto headC = std::make_shared<AlgebraicConstraint>();
  headC->lhs = Term::var(x);
  headC->cmp = CmpOp::Eq;
  headC->ringSpec = r.head.cons->ringSpec;
  headC->ring = r.head.cons->ring;
  headC->body = r.head.cons->body;
  companion.head = Head::ofConstraint(ConstraintPtr(std::move(headC)));

  auto bodyC = std::make_shared<AlgebraicConstraint>();
  bodyC->lhs = Term::var(x);
  bodyC->cmp = CmpOp::Eq;
  bodyC->ringSpec = r.head.cons->ringSpec;
  bodyC->ring = r.head.cons->ring;
  bodyC->body = doubleNegateAtoms(r.head.cons->body);
  Literal bind;
  bind.cons = ConstraintPtr(std::move(bodyC));
  companion.body.push_back(std::move(bind));
  for (const auto& lit : r.body) companion.body.push_back(lit);

  classifyVariables(minimized);
  classifyVariables(companion);
  return {std::move(minimized), std::move(companion)};
}

std::pair<WeightedPtr, std::optional<Literal>> encodeConditional(
    const WeightedPtr& thenW, const WeightedPtr& elseW, const FormulaPtr& cond,
    CondMode mode, const Semiring& ring) {
  auto notCond = Formula::negate(cond);
  switch (mode) {
    case CondMode::Alt:
      return {Weighted::plus(Weighted::times(thenW, Weighted::embed(cond)),
                             Weighted::times(elseW, Weighted::embed(notCond))),
              std::nullopt};
    case CondMode::Vc: {
      auto c = std::make_shared<AlgebraicConstraint>();
      c->lhs = Term::value(Value::ofInt(1));
      c->cmp = CmpOp::Eq;
      c->ringSpec = "bool";
      c->ring = lookupSemiring("bool");
      c->body = Weighted::plus(Weighted::embed(cond), Weighted::embed(notCond));
      Literal extra;
      extra.cons = ConstraintPtr(std::move(c));
      return {Weighted::plus(Weighted::times(thenW, Weighted::embed(cond)),
                             Weighted::times(elseW, Weighted::embed(notCond))),
              std::move(extra)};
    }
    case CondMode::Df: {
      if (!ring.hasAddInverse())
        throw UnsupportedError("df conditionals need an invertible addition; '" +
                               ring.name() + "' has none");
      // phi * s' + (one + -phi) * s''
      auto phiW = Weighted::embed(cond);
      auto oneMinusPhi =
          Weighted::plus(Weighted::constant(ring.one()), Weighted::neg(phiW));
      return {Weighted::plus(Weighted::times(phiW, thenW),
                             Weighted::times(oneMinusPhi, elseW)),
              std::nullopt};
    }
  }
  throw EvalError("unreachable");
}

ConstraintPtr encodeDisjunction(const std::vector<Atom>& atoms) {
  if (atoms.empty()) throw EvalError("empty disjunction");
  WeightedPtr body = Weighted::embed(Formula::atomic(atoms[0]));
  for (size_t i = 1; i < atoms.size(); ++i)
    body = Weighted::plus(body, Weighted::embed(Formula::atomic(atoms[i])));
  auto c = std::make_shared<AlgebraicConstraint>();
  c->lhs = Term::value(Value::ofInt(1));
  c->cmp = CmpOp::Eq;
  c->ringSpec = "bool";
  c->ring = lookupSemiring("bool");
  c->body = std::move(body);
  return c;
}

namespace {

CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::NotGt: return CmpOp::NotLt;
    case CmpOp::NotGe: return CmpOp::NotLe;
    case CmpOp::NotLt: return CmpOp::NotGt;
    case CmpOp::NotLe: return CmpOp::NotGe;
    default: return op;
  }
}

Value negNumeric(const Value& v) {
  if (v.isPosInf()) return Value::negInf();
  if (v.isNegInf()) return Value::posInf();
  if (v.isInt()) return Value::ofInt(-v.asInt());
  return Value::ofRat(-v.asRat());
}

WeightedPtr weightTerm(const Term& t, bool negate) {
  if (t.isValue()) {
    if (!negate) return Weighted::constant(t.val());
    return Weighted::constant(negNumeric(t.val()));
  }
  if (t.isVar()) {
    if (negate)
      throw UnsupportedError(
          "min aggregates need constant weights; the tropical semiring cannot "
          "negate a value variable (use the dual encoding by hand)");
    return Weighted::var(t.name());
  }
  throw TypeError("aggregate weight must be a value or variable, got '" + t.str() +
                  "'");
}

// Elements grouped by weight term: (p(X) + q(X)) * X per group, groups
// chained with +.
WeightedPtr aggregateBody(const std::vector<AggElement>& elems, bool negate) {
  std::vector<std::pair<Term, std::vector<Atom>>> groups;
  for (const auto& e : elems) {
    bool merged = false;
    for (auto& g : groups)
      if (g.first == *e.weight) {
        g.second.push_back(e.atom);
        merged = true;
        break;
      }
    if (!merged) groups.push_back({*e.weight, {e.atom}});
  }
  WeightedPtr body;
  for (const auto& [t, atoms] : groups) {
    WeightedPtr guard = Weighted::embed(Formula::atomic(atoms[0]));
    for (size_t i = 1; i < atoms.size(); ++i)
      guard = Weighted::plus(guard, Weighted::embed(Formula::atomic(atoms[i])));
    WeightedPtr term = Weighted::times(guard, weightTerm(t, negate));
    body = body ? Weighted::plus(body, term) : term;
  }
  return body;
}

}  // namespace

ConstraintPtr encodeAggregate(const Aggregate& agg) {
  auto c = std::make_shared<AlgebraicConstraint>();
  c->lhs = agg.bound;
  c->cmp = agg.cmp;
  switch (agg.kind) {
    case AggKind::Sum: {
      c->ringSpec = agg.ringSpec.value_or("rat");
      c->ring = lookupSemiring(c->ringSpec);
      if (!c->ring) throw TypeError("unknown semiring '" + c->ringSpec + "'");
      c->body = aggregateBody(agg.elems, false);
      break;
    }
    case AggKind::Count: {
      c->ringSpec = agg.ringSpec.value_or("rat");
      c->ring = lookupSemiring(c->ringSpec);
      if (!c->ring) throw TypeError("unknown semiring '" + c->ringSpec + "'");
      WeightedPtr body;
      for (const auto& e : agg.elems) {
        auto term = Weighted::times(Weighted::embed(Formula::atomic(e.atom)),
                                    Weighted::constant(Value::ofInt(1)));
        body = body ? Weighted::plus(body, term) : term;
      }
      c->body = body;
      break;
    }
    case AggKind::Max: {
      c->ringSpec = "maxtrop";
      c->ring = lookupSemiring("maxtrop");
      c->body = aggregateBody(agg.elems, false);
      break;
    }
    case AggKind::Min: {
      // min S ~ k  iff  max(-S) ~mirror -k
      c->ringSpec = "maxtrop";
      c->ring = lookupSemiring("maxtrop");
      if (!agg.bound.isValue())
        throw UnsupportedError("min aggregates need a constant bound");
      c->lhs = Term::value(negNumeric(agg.bound.val()));
      c->cmp = mirror(agg.cmp);
      c->body = aggregateBody(agg.elems, true);
      break;
    }
    case AggKind::Times:
      throw UnsupportedError(
          "times aggregates need the product quantifier, which rule constraints "
          "do not admit; expand by hand over multiple constraints");
    case AggKind::Avg:
      throw UnsupportedError(
          "avg expands to a sum, a count and a rat division constraint; handled "
          "by the program desugaring");
  }
  return c;
}

namespace {

// Replaces Conditional nodes bottom-up; extra vc literals accumulate.
WeightedPtr lowerConditionals(const WeightedPtr& w, const Semiring& ring,
                              std::vector<Literal>& extras) {
  if (!w) return w;
  switch (w->kind) {
    case Weighted::Kind::Const:
    case Weighted::Kind::Var:
    case Weighted::Kind::Embed:
      return w;
    case Weighted::Kind::Conditional: {
      auto thenW = lowerConditionals(w->lhs, ring, extras);
      auto elseW = lowerConditionals(w->rhs, ring, extras);
      auto [res, extra] = encodeConditional(thenW, elseW, w->phi, w->mode, ring);
      if (extra) extras.push_back(std::move(*extra));
      return res;
    }
    case Weighted::Kind::Sum:
      return Weighted::sum(w->boundVar, lowerConditionals(w->lhs, ring, extras));
    case Weighted::Kind::Prod:
      return Weighted::prod(w->boundVar, lowerConditionals(w->lhs, ring, extras));
    case Weighted::Kind::Neg:
      return Weighted::neg(lowerConditionals(w->lhs, ring, extras));
    case Weighted::Kind::Inv:
      return Weighted::inv(lowerConditionals(w->lhs, ring, extras));
    case Weighted::Kind::Implies:
      return Weighted::implies(lowerConditionals(w->lhs, ring, extras),
                               lowerConditionals(w->rhs, ring, extras));
    case Weighted::Kind::Plus:
      return Weighted::plus(lowerConditionals(w->lhs, ring, extras),
                            lowerConditionals(w->rhs, ring, extras));
    case Weighted::Kind::Times:
      return Weighted::times(lowerConditionals(w->lhs, ring, extras),
                             lowerConditionals(w->rhs, ring, extras));
  }
  return w;
}

ConstraintPtr lowerConstraint(const ConstraintPtr& c, std::vector<Literal>& extras) {
  auto n = std::make_shared<AlgebraicConstraint>(*c);
  n->body = lowerConditionals(c->body, *c->ring, extras);
  return n;
}

// avg{...} ~ k  becomes  S =[rat]{sum}, C =[rat]{count}, k ~[rat]{ S * inv(C) }
void expandAvg(const Aggregate& agg, FreshVars& fresh, std::vector<Literal>& out) {
  Aggregate sumAgg = agg;
  sumAgg.kind = AggKind::Sum;
  sumAgg.ringSpec = "rat";
  sumAgg.cmp = CmpOp::Eq;
  std::string sv = fresh.next();
  sumAgg.bound = Term::var(sv);
  Literal sumLit;
  sumLit.cons = encodeAggregate(sumAgg);
  out.push_back(std::move(sumLit));

  Aggregate cntAgg = agg;
  cntAgg.kind = AggKind::Count;
  cntAgg.ringSpec = "rat";
  cntAgg.cmp = CmpOp::Eq;
  std::string cv = fresh.next();
  cntAgg.bound = Term::var(cv);
  Literal cntLit;
  cntLit.cons = encodeAggregate(cntAgg);
  out.push_back(std::move(cntLit));

  auto div = std::make_shared<AlgebraicConstraint>();
  div->lhs = agg.bound;
  div->cmp = agg.cmp;
  div->ringSpec = "rat";
  div->ring = lookupSemiring("rat");
  div->body = Weighted::times(Weighted::var(sv), Weighted::inv(Weighted::var(cv)));
  Literal divLit;
  divLit.cons = ConstraintPtr(std::move(div));
  out.push_back(std::move(divLit));
}

}  // namespace

Program desugarProgram(const Program& p) {
  Program out;
  out.declaredDomain = p.declaredDomain;
  FreshVars fresh;

  for (const auto& rule : p.rules) {
    Rule r;
    std::vector<Literal> extras;

    switch (rule.head.kind) {
      case Head::Kind::Disjunction:
        r.head = Head::ofConstraint(encodeDisjunction(rule.head.disj));
        break;
      case Head::Kind::Constraint:
        r.head = Head::ofConstraint(lowerConstraint(rule.head.cons, extras));
        break;
      default:
        r.head = rule.head;
        break;
    }

    for (const auto& lit : rule.body) {
      if (lit.isAggregate()) {
        if (lit.agg->kind == AggKind::Avg) {
          expandAvg(*lit.agg, fresh, r.body);
          continue;
        }
        Literal l;
        l.negated = lit.negated;
        l.cons = encodeAggregate(*lit.agg);
        r.body.push_back(std::move(l));
        continue;
      }
      if (lit.isConstraint()) {
        Literal l;
        l.negated = lit.negated;
        l.cons = lowerConstraint(lit.cons, extras);
        r.body.push_back(std::move(l));
        continue;
      }
      r.body.push_back(lit);
    }
    for (auto& e : extras) r.body.push_back(std::move(e));

    classifyVariables(r);
    if (r.head.kind == Head::Kind::Constraint && r.head.cons->choice) {
      auto [minimized, companion] = expandChoice(r, fresh);
      out.rules.push_back(std::move(minimized));
      out.rules.push_back(std::move(companion));
    } else {
      out.rules.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace acsolve

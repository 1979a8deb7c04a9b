#include "acsolve/evaluator.hpp"

#include <algorithm>

namespace acsolve {

namespace {

Sat3 not3(Sat3 a) {
  if (a == Sat3::Undef) return Sat3::Undef;
  return a == Sat3::True ? Sat3::False : Sat3::True;
}
Sat3 and3(Sat3 a, Sat3 b) {
  if (a == Sat3::False || b == Sat3::False) return Sat3::False;
  if (a == Sat3::Undef || b == Sat3::Undef) return Sat3::Undef;
  return Sat3::True;
}
Sat3 or3(Sat3 a, Sat3 b) {
  if (a == Sat3::True || b == Sat3::True) return Sat3::True;
  if (a == Sat3::Undef || b == Sat3::Undef) return Sat3::Undef;
  return Sat3::False;
}

}  // namespace

const Term* Evaluator::lookup(const std::string& var) const {
  for (auto it = subst_.rbegin(); it != subst_.rend(); ++it)
    if (it->first == var) return &it->second;
  return nullptr;
}

bool Evaluator::atomHolds(const Atom& a, World w) {
  if (a.ground()) return interp_.contains(w, table_.find(a));
  Atom g;
  g.pred = a.pred;
  g.args.reserve(a.args.size());
  for (const auto& t : a.args) {
    if (t.isVar()) {
      const Term* bound = lookup(t.name());
      if (!bound) throw EvalError("unbound variable '" + t.name() + "'");
      g.args.push_back(*bound);
    } else {
      g.args.push_back(t);
    }
  }
  return interp_.contains(w, table_.find(g));
}

Sat3 Evaluator::sat(const FormulaPtr& f, World w) {
  if (!f) throw EvalError("null formula");
  bool cacheable = subst_.empty();
  if (cacheable) {
    auto it = satCache_.find({f, w});
    if (it != satCache_.end()) return it->second;
  }
  Sat3 r = Sat3::False;
  switch (f->kind) {
    case Formula::Kind::Bottom:
      r = Sat3::False;
      break;
    case Formula::Kind::Atomic:
      r = sat3Of(atomHolds(f->atom, w));
      break;
    case Formula::Kind::Constraint:
      r = satConstraint(*f->cons, w);
      break;
    case Formula::Kind::And:
      r = and3(sat(f->lhs, w), sat(f->rhs, w));
      break;
    case Formula::Kind::Or:
      r = or3(sat(f->lhs, w), sat(f->rhs, w));
      break;
    case Formula::Kind::Implies: {
      // for all w' >= w: not lhs or rhs
      r = or3(not3(sat(f->lhs, World::T)), sat(f->rhs, World::T));
      if (r != Sat3::False && w == World::H)
        r = and3(r, or3(not3(sat(f->lhs, World::H)), sat(f->rhs, World::H)));
      break;
    }
  }
  if (cacheable) satCache_.emplace(std::make_pair(f, w), r);
  return r;
}

bool Evaluator::satBool(const FormulaPtr& f, World w) {
  Sat3 r = sat(f, w);
  if (r == Sat3::Undef) throw EvalError("undefined satisfaction value");
  return r == Sat3::True;
}

Sat3 Evaluator::satConstraint(const AlgebraicConstraint& c, World w) {
  Value lhs;
  if (c.lhs.isValue()) {
    lhs = c.lhs.val();
  } else if (c.lhs.isVar()) {
    const Term* bound = lookup(c.lhs.name());
    if (!bound) throw EvalError("unbound constraint variable '" + c.lhs.name() + "'");
    if (!bound->isValue())
      throw EvalError("constraint variable '" + c.lhs.name() +
                      "' bound to non-value term '" + bound->str() + "'");
    lhs = bound->val();
  } else {
    throw EvalError("constraint bound must be a value or variable");
  }
  auto coerced = c.ring->coerce(lhs);
  if (!coerced) return Sat3::False;  // bound outside the carrier never compares
  lhs = *coerced;

  auto holdsAt = [&](World wp) -> Sat3 {
    EvalResult v = evalWeighted(c.body, *c.ring, wp);
    if (!v) return Sat3::Undef;
    return sat3Of(c.ring->cmpSatisfied(lhs, c.cmp, *v));
  };
  Sat3 r = holdsAt(World::T);
  if (w == World::H && r != Sat3::False) r = and3(r, holdsAt(World::H));
  return r;
}

EvalResult Evaluator::evalWeighted(const WeightedPtr& alpha, const Semiring& ring, World w) {
  if (!alpha) throw EvalError("null weighted formula");
  switch (alpha->kind) {
    case Weighted::Kind::Const:
      return alpha->k;
    case Weighted::Kind::Var: {
      const Term* bound = lookup(alpha->boundVar);
      if (!bound) throw EvalError("unbound variable '" + alpha->boundVar + "'");
      if (!bound->isValue())
        throw EvalError("variable '" + alpha->boundVar +
                        "' stands for a semiring value but is bound to '" +
                        bound->str() + "'");
      auto cv = ring.coerce(bound->val());
      if (!cv)
        throw TypeError("value " + bound->val().str() + " is outside the carrier of '" +
                        ring.name() + "'");
      return *cv;
    }
    case Weighted::Kind::Embed: {
      Sat3 s = sat(alpha->phi, w);
      if (s == Sat3::Undef) return std::nullopt;
      return s == Sat3::True ? ring.one() : ring.zero();
    }
    case Weighted::Kind::Plus: {
      EvalResult l = evalWeighted(alpha->lhs, ring, w);
      if (!l) return std::nullopt;
      EvalResult r = evalWeighted(alpha->rhs, ring, w);
      if (!r) return std::nullopt;
      return ring.add(*l, *r);
    }
    case Weighted::Kind::Times: {
      EvalResult l = evalWeighted(alpha->lhs, ring, w);
      if (!l) return std::nullopt;
      EvalResult r = evalWeighted(alpha->rhs, ring, w);
      if (!r) return std::nullopt;
      return ring.mul(*l, *r);
    }
    case Weighted::Kind::Neg: {
      EvalResult v = evalWeighted(alpha->lhs, ring, w);
      if (!v) return std::nullopt;
      return ring.neg(*v);
    }
    case Weighted::Kind::Inv: {
      EvalResult v = evalWeighted(alpha->lhs, ring, w);
      if (!v) return std::nullopt;
      // the undefined value zero^-1 is zero by convention
      if (ring.compare(*v, ring.zero()) == 0) return ring.zero();
      return ring.inv(*v);
    }
    case Weighted::Kind::Implies: {
      // one iff at every w' >= w the premise is zero or the conclusion nonzero
      auto holdsAt = [&](World wp) -> Sat3 {
        EvalResult l = evalWeighted(alpha->lhs, ring, wp);
        if (!l) return Sat3::Undef;
        if (ring.compare(*l, ring.zero()) == 0) return Sat3::True;
        EvalResult r = evalWeighted(alpha->rhs, ring, wp);
        if (!r) return Sat3::Undef;
        return sat3Of(ring.compare(*r, ring.zero()) != 0);
      };
      Sat3 cond = holdsAt(World::T);
      if (w == World::H && cond != Sat3::False) cond = and3(cond, holdsAt(World::H));
      if (cond == Sat3::Undef) return std::nullopt;
      return cond == Sat3::True ? ring.one() : ring.zero();
    }
    case Weighted::Kind::Sum: {
      const VarRange* range = env_ ? env_->find(alpha->boundVar) : nullptr;
      if (!range) throw EvalError("no range for variable '" + alpha->boundVar + "'");
      if (range->infiniteMarker) return std::nullopt;
      Value acc = ring.zero();
      for (const auto& xi : range->elems) {
        bind(alpha->boundVar, xi);
        EvalResult v;
        try {
          v = evalWeighted(alpha->lhs, ring, w);
        } catch (...) {
          unbind();
          throw;
        }
        unbind();
        if (!v) return std::nullopt;
        if (ring.compare(*v, ring.zero()) != 0) acc = ring.add(acc, *v);
      }
      return acc;
    }
    case Weighted::Kind::Prod: {
      if (!ring.mulCommutative())
        throw UnsupportedError("product binder over non-commutative multiplication");
      const VarRange* range = env_ ? env_->find(alpha->boundVar) : nullptr;
      if (!range) throw EvalError("no range for variable '" + alpha->boundVar + "'");
      if (range->infiniteMarker) return std::nullopt;
      Value acc = ring.one();
      for (const auto& xi : range->elems) {
        bind(alpha->boundVar, xi);
        EvalResult v;
        try {
          v = evalWeighted(alpha->lhs, ring, w);
        } catch (...) {
          unbind();
          throw;
        }
        unbind();
        if (!v) return std::nullopt;
        if (ring.compare(*v, ring.one()) != 0) acc = ring.mul(acc, *v);
      }
      return acc;
    }
    case Weighted::Kind::Conditional:
      throw EvalError("conditional was not desugared before evaluation");
  }
  throw EvalError("unreachable weighted kind");
}

std::vector<Term> Evaluator::support(const WeightedPtr& alpha, const std::string& var,
                                     const Semiring& ring, const std::vector<Term>& range,
                                     RingOp which, World w) {
  const Value& unit = which == RingOp::Add ? ring.zero() : ring.one();
  std::vector<Term> out;
  for (const auto& xi : range) {
    bind(var, xi);
    EvalResult v;
    try {
      v = evalWeighted(alpha, ring, w);
    } catch (...) {
      unbind();
      throw;
    }
    unbind();
    if (!v) throw EvalError("undefined value in support computation");
    if (ring.compare(*v, unit) != 0) out.push_back(xi);
  }
  return out;
}

namespace {

Sat3 litSat(Evaluator& ev, const Literal& lit, World wp) {
  auto plain = [&](World x) -> Sat3 {
    if (lit.isAtom()) return sat3Of(ev.holdsAtom(*lit.atom, x));
    if (lit.isConstraint()) return ev.satConstraint(*lit.cons, x);
    throw EvalError("aggregate literal was not desugared");
  };
  if (!lit.negated) return plain(wp);
  Sat3 neg = not3(plain(World::T));
  if (wp == World::H && neg != Sat3::False) neg = and3(neg, not3(plain(World::H)));
  return neg;
}

}  // namespace

Sat3 satRuleBody(Evaluator& ev, const Rule& rule, World w) {
  Sat3 acc = Sat3::True;
  for (const auto& lit : rule.body) {
    acc = and3(acc, litSat(ev, lit, w));
    if (acc == Sat3::False) return acc;
  }
  return acc;
}

Sat3 satRule(Evaluator& ev, const Rule& rule, World w) {
  auto bodyAt = [&](World wp) -> Sat3 { return satRuleBody(ev, rule, wp); };

  auto headAt = [&](World wp) -> Sat3 {
    switch (rule.head.kind) {
      case Head::Kind::Bottom:
        return Sat3::False;
      case Head::Kind::Atom:
        return sat3Of(ev.holdsAtom(*rule.head.atom, wp));
      case Head::Kind::Constraint:
        return ev.satConstraint(*rule.head.cons, wp);
      case Head::Kind::Disjunction: {
        Sat3 acc = Sat3::False;
        for (const auto& a : rule.head.disj) acc = or3(acc, sat3Of(ev.holdsAtom(a, wp)));
        return acc;
      }
    }
    return Sat3::False;
  };

  // (B -> H) at w quantifies over all worlds >= w
  Sat3 r = or3(not3(bodyAt(World::T)), headAt(World::T));
  if (w == World::H && r != Sat3::False)
    r = and3(r, or3(not3(bodyAt(World::H)), headAt(World::H)));
  return r;
}

namespace {

WeightedPtr tauInvertible(const FormulaPtr& phi, const Semiring& ring) {
  switch (phi->kind) {
    case Formula::Kind::Bottom:
      return Weighted::constant(ring.zero());
    case Formula::Kind::Atomic:
      return Weighted::embed(phi);
    case Formula::Kind::And:
      return Weighted::times(tauInvertible(phi->lhs, ring), tauInvertible(phi->rhs, ring));
    case Formula::Kind::Or: {
      auto one = [&] { return Weighted::constant(ring.one()); };
      auto l = Weighted::plus(one(), Weighted::neg(tauInvertible(phi->lhs, ring)));
      auto r = Weighted::plus(one(), Weighted::neg(tauInvertible(phi->rhs, ring)));
      return Weighted::plus(one(), Weighted::neg(Weighted::times(l, r)));
    }
    case Formula::Kind::Implies:
      return Weighted::implies(tauInvertible(phi->lhs, ring), tauInvertible(phi->rhs, ring));
  }
  throw EvalError("unreachable");
}

// The idempotent route replaces the Boolean connectives directly.
WeightedPtr tauIdempotent(const FormulaPtr& phi, const Semiring& ring) {
  switch (phi->kind) {
    case Formula::Kind::Bottom:
      return Weighted::constant(ring.zero());
    case Formula::Kind::Atomic:
      return Weighted::embed(phi);
    case Formula::Kind::And:
      return Weighted::times(tauIdempotent(phi->lhs, ring), tauIdempotent(phi->rhs, ring));
    case Formula::Kind::Or:
      return Weighted::plus(tauIdempotent(phi->lhs, ring), tauIdempotent(phi->rhs, ring));
    case Formula::Kind::Implies:
      return Weighted::implies(tauIdempotent(phi->lhs, ring), tauIdempotent(phi->rhs, ring));
  }
  throw EvalError("unreachable");
}

}  // namespace

WeightedPtr tauTranslate(const FormulaPtr& phi, const Semiring& ring) {
  if (ring.hasAddInverse()) return tauInvertible(phi, ring);
  if (ring.addIdempotent()) return tauIdempotent(phi, ring);
  throw UnsupportedError("tau translation needs an invertible or idempotent addition");
}

}  // namespace acsolve

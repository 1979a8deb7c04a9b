#include "acsolve/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <thread>

#include "acsolve/desugar.hpp"
#include "acsolve/printer.hpp"

namespace acsolve {

namespace {

// ---------------------------------------------------------------------------
// Compiled rule forms. Grounded rules are walked millions of times during
// enumeration; compiling resolves atoms to table ids and expands Sum binders
// over their (finite) ranges once.
// ---------------------------------------------------------------------------

struct CCons;

struct CF {
  enum class K : uint8_t { Bottom, Atom, Not, And, Or, Impl, Cons };
  K k = K::Bottom;
  int atom = -1;
  // the H-world verdict provably equals the T-world one (negations always
  // qualify: here is a subset of there)
  bool tStable = false;
  std::unique_ptr<CF> a, b;
  std::unique_ptr<CCons> cons;
};

struct CW {
  enum class K : uint8_t { Const, Atom, Form, Plus, Times, Neg, Inv, Impl, Sum };
  K k = K::Const;
  Value c;
  int atom = -1;
  std::unique_ptr<CF> f;
  std::unique_ptr<CW> a, b;
  std::vector<std::unique_ptr<CW>> inst;  // expanded Sum instances
  bool tStable = false;         // value at H provably equals the value at T
  Int ci;                       // integer view of c for the fast path
  mutable uint32_t tEpoch = 0;  // T-world value cache, valid per candidate
  mutable Value tCache;
  mutable uint32_t hEpoch = 0;  // H-world value cache, valid per subset probe
  mutable Value hCache;
  mutable uint32_t tEpochI = 0, hEpochI = 0;
  mutable Int tCacheI, hCacheI;
};

// Fast-path ring classes: integer-backed carriers avoid the Value variant
// and the virtual ring dispatch on the hot loops.
enum class FastRing : uint8_t { None, Bool, IntPlain };

struct CCons {
  Value lhs;
  CmpOp cmp = CmpOp::Eq;
  const Semiring* ring = nullptr;
  std::shared_ptr<CW> body;  // shared between rules with equal bodies
  FastRing fast = FastRing::None;
  Int lhsI;
  mutable uint32_t tEpoch = 0;  // T-world verdict cache, valid per candidate
  mutable bool tSat = false;
};

struct CLit {
  bool neg = false;
  int atom = -1;
  std::unique_ptr<CCons> cons;
};

struct CRule {
  enum class HeadK : uint8_t { Bottom, Atom, Cons };
  HeadK head = HeadK::Bottom;
  int headAtom = -1;
  std::unique_ptr<CCons> headCons;
  std::vector<CLit> body;
  mutable uint32_t tEpoch = 0;  // T-point satisfaction cache
  mutable bool tSat = false;
};

// The T side of a candidate check is fixed while its subsets are probed; a
// nonzero epoch caches every T-world result on the compiled nodes.
struct Bits {
  const AtomBits* here;
  const AtomBits* there;
  uint32_t epoch = 0;   // T-side cache key (fixed per candidate)
  uint32_t hEpoch = 0;  // H-side cache key (fixed per subset probe)
  bool test(World w, int id) const {
    const AtomBits& b = w == World::H ? *here : *there;
    return id >= 0 && static_cast<size_t>(id) < b.size() && b[static_cast<size_t>(id)];
  }
};

bool satCF(const CF& f, const Bits& I, World w);
bool satCCons(const CCons& c, const Bits& I, World w);

Value evalCW(const CW& e, const Semiring& ring, const Bits& I, World w) {
  if (w == World::H && (e.tStable || I.here == I.there)) w = World::T;
  if (w == World::T && I.epoch && e.tEpoch == I.epoch) return e.tCache;
  if (w == World::H && I.hEpoch && e.hEpoch == I.hEpoch) return e.hCache;
  Value out;
  switch (e.k) {
    case CW::K::Const:
      out = e.c;
      break;
    case CW::K::Atom:
      out = I.test(w, e.atom) ? ring.one() : ring.zero();
      break;
    case CW::K::Form:
      out = satCF(*e.f, I, w) ? ring.one() : ring.zero();
      break;
    case CW::K::Plus:
      out = ring.add(evalCW(*e.a, ring, I, w), evalCW(*e.b, ring, I, w));
      break;
    case CW::K::Times:
      out = ring.mul(evalCW(*e.a, ring, I, w), evalCW(*e.b, ring, I, w));
      break;
    case CW::K::Neg:
      out = ring.neg(evalCW(*e.a, ring, I, w));
      break;
    case CW::K::Inv: {
      Value v = evalCW(*e.a, ring, I, w);
      out = ring.compare(v, ring.zero()) == 0 ? ring.zero() : ring.inv(v);
      break;
    }
    case CW::K::Impl: {
      auto holdsAt = [&](World wp) {
        Value l = evalCW(*e.a, ring, I, wp);
        if (ring.compare(l, ring.zero()) == 0) return true;
        Value r = evalCW(*e.b, ring, I, wp);
        return ring.compare(r, ring.zero()) != 0;
      };
      bool ok = holdsAt(World::T) && (w == World::T || holdsAt(World::H));
      out = ok ? ring.one() : ring.zero();
      break;
    }
    case CW::K::Sum: {
      Value acc = ring.zero();
      for (const auto& i : e.inst) {
        Value v = evalCW(*i, ring, I, w);
        if (ring.compare(v, ring.zero()) != 0) acc = ring.add(acc, v);
      }
      out = acc;
      break;
    }
  }
  if (w == World::T && I.epoch) {
    e.tEpoch = I.epoch;
    e.tCache = out;
  } else if (w == World::H && I.hEpoch) {
    e.hEpoch = I.hEpoch;
    e.hCache = out;
  }
  return out;
}

Int evalFastI(const CW& e, const Bits& I, World w, bool isBool);

bool satCF(const CF& f, const Bits& I, World w) {
  if (w == World::H && (f.tStable || I.here == I.there)) w = World::T;
  switch (f.k) {
    case CF::K::Bottom:
      return false;
    case CF::K::Atom:
      return I.test(w, f.atom);
    case CF::K::Not:
      // phi -> bot quantifies over both worlds
      if (satCF(*f.a, I, World::T)) return false;
      return w == World::T || !satCF(*f.a, I, World::H);
    case CF::K::And:
      return satCF(*f.a, I, w) && satCF(*f.b, I, w);
    case CF::K::Or:
      return satCF(*f.a, I, w) || satCF(*f.b, I, w);
    case CF::K::Impl: {
      auto at = [&](World wp) { return !satCF(*f.a, I, wp) || satCF(*f.b, I, wp); };
      return at(World::T) && (w == World::T || at(World::H));
    }
    case CF::K::Cons:
      return satCCons(*f.cons, I, w);
  }
  return false;
}

Int evalFastI(const CW& e, const Bits& I, World w, bool isBool) {
  if (w == World::H && (e.tStable || I.here == I.there)) w = World::T;
  if (w == World::T && I.epoch && e.tEpochI == I.epoch) return e.tCacheI;
  if (w == World::H && I.hEpoch && e.hEpochI == I.hEpoch) return e.hCacheI;
  Int out;
  switch (e.k) {
    case CW::K::Const:
      out = e.ci;
      break;
    case CW::K::Atom:
      out = I.test(w, e.atom) ? 1 : 0;
      break;
    case CW::K::Form:
      out = satCF(*e.f, I, w) ? 1 : 0;
      break;
    case CW::K::Plus: {
      if (isBool) {
        out = (evalFastI(*e.a, I, w, isBool) != 0 || evalFastI(*e.b, I, w, isBool) != 0)
                  ? 1
                  : 0;
      } else {
        out = evalFastI(*e.a, I, w, isBool) + evalFastI(*e.b, I, w, isBool);
      }
      break;
    }
    case CW::K::Times: {
      if (isBool) {
        out = (evalFastI(*e.a, I, w, isBool) != 0 && evalFastI(*e.b, I, w, isBool) != 0)
                  ? 1
                  : 0;
      } else {
        out = evalFastI(*e.a, I, w, isBool) * evalFastI(*e.b, I, w, isBool);
      }
      break;
    }
    case CW::K::Neg:
      out = -evalFastI(*e.a, I, w, isBool);
      break;
    case CW::K::Impl: {
      auto holdsAt = [&](World wp) {
        if (evalFastI(*e.a, I, wp, isBool) == 0) return true;
        return evalFastI(*e.b, I, wp, isBool) != 0;
      };
      out = (holdsAt(World::T) && (w == World::T || holdsAt(World::H))) ? 1 : 0;
      break;
    }
    case CW::K::Sum: {
      out = 0;
      for (const auto& i : e.inst) {
        if (isBool) {
          if (evalFastI(*i, I, w, isBool) != 0) {
            out = 1;
            break;
          }
        } else {
          out += evalFastI(*i, I, w, isBool);
        }
      }
      break;
    }
    case CW::K::Inv:
      throw EvalError("inverse in integer fast path");
  }
  if (w == World::T && I.epoch) {
    e.tEpochI = I.epoch;
    e.tCacheI = out;
  } else if (w == World::H && I.hEpoch) {
    e.hEpochI = I.hEpoch;
    e.hCacheI = out;
  }
  return out;
}

bool cmpIntSat(const Int& lhs, CmpOp op, const Int& rhs) {
  switch (op) {
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::NotGt: return !(lhs > rhs);
    case CmpOp::NotGe: return !(lhs >= rhs);
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::NotLe: return !(lhs <= rhs);
    case CmpOp::NotLt: return !(lhs < rhs);
  }
  return false;
}

bool satCCons(const CCons& c, const Bits& I, World w) {
  if (c.fast != FastRing::None) {
    bool isBool = c.fast == FastRing::Bool;
    auto atF = [&](World wp) {
      return cmpIntSat(c.lhsI, c.cmp, evalFastI(*c.body, I, wp, isBool));
    };
    bool tOk;
    if (I.epoch && c.tEpoch == I.epoch) {
      tOk = c.tSat;
    } else {
      tOk = atF(World::T);
      if (I.epoch) {
        c.tEpoch = I.epoch;
        c.tSat = tOk;
      }
    }
    return tOk && (w == World::T || c.body->tStable || I.here == I.there ||
                   atF(World::H));
  }
  auto at = [&](World wp) {
    Value v = evalCW(*c.body, *c.ring, I, wp);
    return c.ring->cmpSatisfied(c.lhs, c.cmp, v);
  };
  bool tOk;
  if (I.epoch && c.tEpoch == I.epoch) {
    tOk = c.tSat;
  } else {
    tOk = at(World::T);
    if (I.epoch) {
      c.tEpoch = I.epoch;
      c.tSat = tOk;
    }
  }
  return tOk && (w == World::T || c.body->tStable || at(World::H));
}

bool satCLit(const CLit& l, const Bits& I, World w) {
  auto plain = [&](World wp) {
    return l.cons ? satCCons(*l.cons, I, wp) : I.test(wp, l.atom);
  };
  if (!l.neg) return plain(w);
  if (plain(World::T)) return false;
  return w == World::T || !plain(World::H);
}

bool satCRule(const CRule& r, const Bits& I, World w) {
  auto bodyAt = [&](World wp) {
    for (const auto& l : r.body)
      if (!satCLit(l, I, wp)) return false;
    return true;
  };
  auto headAt = [&](World wp) {
    switch (r.head) {
      case CRule::HeadK::Bottom:
        return false;
      case CRule::HeadK::Atom:
        return I.test(wp, r.headAtom);
      case CRule::HeadK::Cons:
        return satCCons(*r.headCons, I, wp);
    }
    return false;
  };
  bool tOk;
  if (I.epoch && r.tEpoch == I.epoch) {
    tOk = r.tSat;
  } else {
    tOk = !bodyAt(World::T) || headAt(World::T);
    if (I.epoch) {
      r.tEpoch = I.epoch;
      r.tSat = tOk;
    }
  }
  return tOk && (w == World::T || !bodyAt(World::H) || headAt(World::H));
}

// ---------------------------------------------------------------------------
// Compilation (AST -> C-forms) against a fixed table and range environment.
// ---------------------------------------------------------------------------

struct CompileCtx {
  const AtomTable& table;
  const RangeEnv& env;
  Subst subst;
  // constraint bounds that are deferred variables; patched per candidate
  std::vector<std::pair<CCons*, std::string>>* varBounds = nullptr;
  // structural sharing of equal constraint bodies across rules, so shared
  // sums are evaluated once per probe
  std::map<std::string, std::shared_ptr<CW>>* bodyCache = nullptr;
};

std::unique_ptr<CF> compileF(const FormulaPtr& f, CompileCtx& ctx);
std::unique_ptr<CCons> compileCons(const AlgebraicConstraint& c, CompileCtx& ctx);

bool fastEligible(const CW& e, bool allowNeg) {
  switch (e.k) {
    case CW::K::Const:
      return e.c.isInt();
    case CW::K::Atom:
    case CW::K::Form:
      return true;
    case CW::K::Plus:
    case CW::K::Times:
    case CW::K::Impl:
      return fastEligible(*e.a, allowNeg) && fastEligible(*e.b, allowNeg);
    case CW::K::Neg:
      return allowNeg && fastEligible(*e.a, allowNeg);
    case CW::K::Inv:
      return false;
    case CW::K::Sum:
      for (const auto& i : e.inst)
        if (!fastEligible(*i, allowNeg)) return false;
      return true;
  }
  return false;
}

void prepareFastConsts(CW& e) {
  if (e.k == CW::K::Const) e.ci = e.c.asInt();
  if (e.a) prepareFastConsts(*e.a);
  if (e.b) prepareFastConsts(*e.b);
  for (auto& i : e.inst) prepareFastConsts(*i);
}

void classifyFast(CCons& c) {
  const std::string& n = c.ring->name();
  bool isBool = n == "bool";
  bool isPlain = n == "nat" || n == "int";
  if (!isBool && !isPlain) return;
  if (!c.lhs.isInt()) return;
  if (!fastEligible(*c.body, n == "int")) return;
  c.fast = isBool ? FastRing::Bool : FastRing::IntPlain;
  c.lhsI = c.lhs.asInt();
  prepareFastConsts(*c.body);
}

std::unique_ptr<CW> compileW(const WeightedPtr& w, const Semiring& ring, CompileCtx& ctx) {
  auto out = std::make_unique<CW>();
  switch (w->kind) {
    case Weighted::Kind::Const:
      out->k = CW::K::Const;
      out->c = w->k;
      out->tStable = true;
      return out;
    case Weighted::Kind::Var: {
      auto it = ctx.subst.find(w->boundVar);
      if (it == ctx.subst.end() || !it->second.isValue())
        throw EvalError("unbound value variable '" + w->boundVar + "' in compilation");
      auto cv = ring.coerce(it->second.val());
      if (!cv)
        throw TypeError("value " + it->second.val().str() +
                        " is outside the carrier of '" + ring.name() + "'");
      out->k = CW::K::Const;
      out->c = *cv;
      out->tStable = true;
      return out;
    }
    case Weighted::Kind::Embed: {
      if (w->phi->kind == Formula::Kind::Atomic) {
        out->k = CW::K::Atom;
        out->atom = ctx.table.find(substitute(w->phi->atom, ctx.subst));
        return out;
      }
      out->k = CW::K::Form;
      out->f = compileF(w->phi, ctx);
      out->tStable = out->f->tStable;
      return out;
    }
    case Weighted::Kind::Plus:
    case Weighted::Kind::Times:
    case Weighted::Kind::Implies:
      out->k = w->kind == Weighted::Kind::Plus    ? CW::K::Plus
               : w->kind == Weighted::Kind::Times ? CW::K::Times
                                                  : CW::K::Impl;
      out->a = compileW(w->lhs, ring, ctx);
      out->b = compileW(w->rhs, ring, ctx);
      out->tStable = out->a->tStable && out->b->tStable;
      return out;
    case Weighted::Kind::Neg:
      out->k = CW::K::Neg;
      out->a = compileW(w->lhs, ring, ctx);
      out->tStable = out->a->tStable;
      return out;
    case Weighted::Kind::Inv:
      out->k = CW::K::Inv;
      out->a = compileW(w->lhs, ring, ctx);
      out->tStable = out->a->tStable;
      return out;
    case Weighted::Kind::Sum: {
      const VarRange* range = ctx.env.find(w->boundVar);
      if (!range) throw EvalError("no range for '" + w->boundVar + "' in compilation");
      if (range->infiniteMarker)
        throw EvalError("compiled path cannot expand an infinite range");
      out->k = CW::K::Sum;
      out->tStable = true;
      for (const auto& xi : range->elems) {
        auto saved = ctx.subst.find(w->boundVar) != ctx.subst.end()
                         ? std::optional<Term>(ctx.subst[w->boundVar])
                         : std::nullopt;
        ctx.subst[w->boundVar] = xi;
        out->inst.push_back(compileW(w->lhs, ring, ctx));
        out->tStable = out->tStable && out->inst.back()->tStable;
        if (saved)
          ctx.subst[w->boundVar] = *saved;
        else
          ctx.subst.erase(w->boundVar);
      }
      return out;
    }
    case Weighted::Kind::Prod:
      throw EvalError("product binders do not occur in ground rules");
    case Weighted::Kind::Conditional:
      throw EvalError("conditional was not desugared");
  }
  return out;
}

std::unique_ptr<CF> compileF(const FormulaPtr& f, CompileCtx& ctx) {
  auto out = std::make_unique<CF>();
  switch (f->kind) {
    case Formula::Kind::Bottom:
      out->k = CF::K::Bottom;
      out->tStable = true;
      return out;
    case Formula::Kind::Atomic:
      out->k = CF::K::Atom;
      out->atom = ctx.table.find(substitute(f->atom, ctx.subst));
      return out;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      out->k = f->kind == Formula::Kind::And ? CF::K::And : CF::K::Or;
      out->a = compileF(f->lhs, ctx);
      out->b = compileF(f->rhs, ctx);
      out->tStable = out->a->tStable && out->b->tStable;
      return out;
    case Formula::Kind::Implies:
      if (f->isNegation()) {
        out->k = CF::K::Not;
        out->a = compileF(f->lhs, ctx);
        // by persistence a negation is false at H exactly when false at T
        out->tStable = true;
        return out;
      }
      out->k = CF::K::Impl;
      out->a = compileF(f->lhs, ctx);
      out->b = compileF(f->rhs, ctx);
      out->tStable = out->a->tStable && out->b->tStable;
      return out;
    case Formula::Kind::Constraint:
      out->k = CF::K::Cons;
      out->cons = compileCons(*f->cons, ctx);
      return out;
  }
  return out;
}

std::unique_ptr<CCons> compileCons(const AlgebraicConstraint& c, CompileCtx& ctx) {
  auto out = std::make_unique<CCons>();
  Term lhs = substitute(c.lhs, ctx.subst);
  auto compileBody = [&ctx, &c]() -> std::shared_ptr<CW> {
    if (!ctx.bodyCache) return compileW(c.body, *c.ring, ctx);
    std::string key = c.ring->name() + "|" + printWeighted(c.body);
    auto it = ctx.bodyCache->find(key);
    if (it != ctx.bodyCache->end()) return it->second;
    std::shared_ptr<CW> compiled = compileW(c.body, *c.ring, ctx);
    ctx.bodyCache->emplace(std::move(key), compiled);
    return compiled;
  };
  if (lhs.isVar() && ctx.varBounds) {
    out->lhs = c.ring->zero();  // patched before evaluation
    out->cmp = c.cmp;
    out->ring = c.ring;
    out->body = compileBody();
    classifyFast(*out);
    ctx.varBounds->push_back({out.get(), lhs.name()});
    return out;
  }
  if (!lhs.isValue())
    throw EvalError("constraint bound '" + lhs.str() + "' is not ground");
  auto cv = c.ring->coerce(lhs.val());
  out->lhs = cv ? *cv : lhs.val();
  if (!cv) {
    // a bound outside the carrier never compares: encode as bottom-like
    // by an always-false comparison on the zero
    out->lhs = c.ring->zero();
    out->cmp = CmpOp::Ne;
    out->ring = c.ring;
    out->body = std::make_unique<CW>();
    out->body->k = CW::K::Const;
    out->body->c = c.ring->zero();
    return out;
  }
  out->cmp = c.cmp;
  out->ring = c.ring;
  out->body = compileBody();
  classifyFast(*out);
  return out;
}

CRule compileRule(const Rule& r, const AtomTable& table, const RangeEnv& env,
                  std::vector<std::pair<CCons*, std::string>>* varBounds = nullptr,
                  std::map<std::string, std::shared_ptr<CW>>* bodyCache = nullptr) {
  CompileCtx ctx{table, env, {}, varBounds, bodyCache};
  CRule out;
  switch (r.head.kind) {
    case Head::Kind::Bottom:
      out.head = CRule::HeadK::Bottom;
      break;
    case Head::Kind::Atom:
      out.head = CRule::HeadK::Atom;
      out.headAtom = table.find(*r.head.atom);
      break;
    case Head::Kind::Constraint:
      out.head = CRule::HeadK::Cons;
      out.headCons = compileCons(*r.head.cons, ctx);
      break;
    case Head::Kind::Disjunction:
      throw EvalError("disjunctive head was not desugared");
  }
  for (const auto& lit : r.body) {
    CLit l;
    l.neg = lit.negated;
    if (lit.isAtom()) {
      l.atom = table.find(*lit.atom);
    } else if (lit.isConstraint()) {
      l.cons = compileCons(*lit.cons, ctx);
    } else {
      throw EvalError("aggregate was not desugared");
    }
    out.body.push_back(std::move(l));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Candidate checking
// ---------------------------------------------------------------------------

Sat3 and3(Sat3 a, Sat3 b) {
  if (a == Sat3::False || b == Sat3::False) return Sat3::False;
  if (a == Sat3::Undef || b == Sat3::Undef) return Sat3::Undef;
  return Sat3::True;
}

struct Checker {
  const GroundProgram& g;
  SolveConfig cfg;
  AtomTable table;  // working copy; lazily derived atoms are appended
  bool hasLazy = false;
  bool hasMarkers = false;
  bool lazyAtomHeads = false;  // deferred bindings can create new atoms
  bool staticPath = false;     // everything compiled once, bounds patched
  std::vector<CRule> staticRules;  // compiled non-lazy rules
  // lazy rules compiled once; per candidate the deferred bounds are patched
  // with the binding's T-world value
  struct StaticLazy {
    CRule rule;
    // per deferred variable: its patch points and the compiled binding body
    struct Binding {
      std::string var;
      const CW* body = nullptr;
      const Semiring* ring = nullptr;
      FastRing fast = FastRing::None;
      std::vector<CCons*> patches;
    };
    std::vector<Binding> bindings;
  };
  std::vector<StaticLazy> staticLazy;
  std::vector<const GroundRule*> astLazyRules;  // fallback for odd shapes
  std::map<std::string, std::shared_ptr<CW>> bodyCache;
  uint32_t epochCounter = 0;
  uint32_t hEpochCounter = 0;

  Checker(const GroundProgram& gp, const SolveConfig& c) : g(gp), cfg(c) {
    for (size_t i = 0; i < gp.base.size(); ++i) table.intern(gp.base.atom(static_cast<int>(i)));
    for (const auto& r : g.rules) {
      if (!r.lazy.empty()) {
        hasLazy = true;
        if (r.closed.head.kind == Head::Kind::Atom) lazyAtomHeads = true;
      }
      if (!r.infiniteVars.empty()) hasMarkers = true;
    }
    // the compiled forms stay valid across candidates as long as no new
    // atoms (hence no new range values) can appear
    staticPath = !hasMarkers && !lazyAtomHeads;
    if (!staticPath) return;
    for (const auto& r : g.rules) {
      RangeEnv env = g.staticEnv(r);
      if (r.lazy.empty()) {
        staticRules.push_back(compileRule(r.closed, table, env, nullptr, &bodyCache));
        continue;
      }
      StaticLazy sl;
      std::vector<std::pair<CCons*, std::string>> bounds;
      bool ok = true;
      try {
        sl.rule = compileRule(r.closed, table, env, &bounds, &bodyCache);
      } catch (const EvalError&) {
        ok = false;  // deferred variable inside a weighted body
      }
      if (!ok) {
        staticPath = false;
        staticRules.clear();
        staticLazy.clear();
        return;
      }
      for (const auto& lb : r.lazy) {
        StaticLazy::Binding b;
        b.var = lb.var;
        b.ring = r.closed.body[lb.bodyIndex].cons->ring;
        // the compiled literal at the binding's position carries the body
        // that computes the value
        b.body = sl.rule.body[lb.bodyIndex].cons->body.get();
        b.fast = sl.rule.body[lb.bodyIndex].cons->fast;
        for (auto& [cc, var] : bounds)
          if (var == lb.var) b.patches.push_back(cc);
        sl.bindings.push_back(std::move(b));
      }
      staticLazy.push_back(std::move(sl));
    }
  }

  // Facts force their atoms into every model and into every blocker.
  std::vector<int> forcedAtoms() const {
    std::vector<int> out;
    for (const auto& r : g.rules) {
      if (!r.lazy.empty() || !r.closed.body.empty()) continue;
      if (r.closed.head.kind == Head::Kind::Atom && r.closed.head.atom->ground()) {
        int id = table.find(*r.closed.head.atom);
        if (id >= 0) out.push_back(id);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // --- static path: everything compiled once, deferred bounds patched ---

  // Pins every deferred binding to its T-world value under M and returns
  // the cache epoch for this candidate.
  uint32_t beginCandidate(const AtomBits& M) {
    uint32_t ep = ++epochCounter;
    Bits bits{&M, &M, ep};
    for (auto& sl : staticLazy)
      for (auto& b : sl.bindings) {
        Value v = b.fast != FastRing::None
                      ? Value::ofInt(evalFastI(*b.body, bits, World::T,
                                               b.fast == FastRing::Bool))
                      : evalCW(*b.body, *b.ring, bits, World::T);
        for (CCons* cc : b.patches) {
          cc->lhs = v;
          if (cc->fast != FastRing::None) cc->lhsI = v.asInt();
        }
      }
    return ep;
  }

  // valid while forced atoms are set in `here`; fact rules are skipped
  bool staticModelAt(const AtomBits& here, const AtomBits& there, uint32_t ep,
                     World w, uint32_t hep = 0) {
    Bits I{&here, &there, ep, hep};
    for (size_t i : coreRules)
      if (!satCRule(staticRules[i], I, w)) return false;
    for (const auto& sl : staticLazy)
      if (!satCRule(sl.rule, I, w)) return false;
    return true;
  }
  std::vector<size_t> coreRules;  // static rules that are not plain facts

  void finishSetup() {
    auto forced = forcedAtoms();
    size_t idx = 0;
    for (const auto& r : g.rules) {
      if (!r.lazy.empty() || !r.infiniteVars.empty()) continue;
      if (!staticPath) break;
      bool fact = r.closed.body.empty() && r.closed.head.kind == Head::Kind::Atom &&
                  r.closed.head.atom->ground() &&
                  std::binary_search(forced.begin(), forced.end(),
                                     table.find(*r.closed.head.atom));
      if (!fact) coreRules.push_back(idx);
      ++idx;
    }
  }

  // --- dynamic path: markers or atom-creating bindings ---

  struct Ctx {
    std::vector<CRule> compiled;
    std::vector<const GroundRule*> astRules;  // marker rules stay on the AST path
    std::vector<Rule> astResolved;
    std::vector<std::shared_ptr<RangeEnv>> astEnvs;
    bool usable = true;
  };

  Ctx prepare(const AtomBits& there) {
    Ctx ctx;
    HTInterpretation it = HTInterpretation::total(there);
    for (const auto& r : g.rules) {
      auto env = std::make_shared<RangeEnv>(g.envFor(r, table, there));
      if (!r.infiniteVars.empty()) {
        // undefined-path rules are evaluated structurally
        Rule resolved = r.closed;
        if (!r.lazy.empty()) {
          Evaluator ev(table, it, env.get());
          bool defined = true;
          resolved = resolveLazyAtT(r, ev, defined);
          if (!defined) {
            ctx.usable = false;
            return ctx;
          }
        }
        ctx.astRules.push_back(&r);
        ctx.astResolved.push_back(std::move(resolved));
        ctx.astEnvs.push_back(env);
        continue;
      }
      Rule resolved = r.closed;
      if (!r.lazy.empty()) {
        Evaluator ev(table, it, env.get());
        bool defined = true;
        resolved = resolveLazyAtT(r, ev, defined);
        if (!defined) {
          ctx.usable = false;
          return ctx;
        }
        // newly derived head atoms may extend the table
        if (resolved.head.kind == Head::Kind::Atom && resolved.head.atom->ground())
          table.intern(*resolved.head.atom);
      }
      ctx.compiled.push_back(compileRule(resolved, table, *env));
    }
    return ctx;
  }

  Sat3 htModelAt(const Ctx& ctx, const AtomBits& here, const AtomBits& there, World w) {
    Bits I{&here, &there};
    for (const auto& r : ctx.compiled)
      if (!satCRule(r, I, w)) return Sat3::False;
    Sat3 acc = Sat3::True;
    HTInterpretation ht(here, there);
    for (size_t i = 0; i < ctx.astResolved.size(); ++i) {
      Evaluator ev(table, ht, ctx.astEnvs[i].get());
      acc = and3(acc, satRule(ev, ctx.astResolved[i], w));
      if (acc == Sat3::False) return acc;
    }
    return acc;
  }
};

AtomBits bitsFor(const AtomTable& table, const std::vector<Atom>& atoms, AtomTable* grow) {
  AtomBits b(table.size(), false);
  for (const auto& a : atoms) {
    int id = grow ? grow->intern(a) : table.find(a);
    if (id < 0) continue;
    if (static_cast<size_t>(id) >= b.size()) b.resize(id + 1, false);
    b[id] = true;
  }
  return b;
}

std::vector<Atom> atomsOf(const AtomTable& table, const AtomBits& bits) {
  std::vector<Atom> out;
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out.push_back(table.atom(static_cast<int>(i)));
  std::sort(out.begin(), out.end());
  return out;
}

bool modelLess(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Extends a candidate by the atoms its deferred bindings derive under the
// candidate itself, to a fixpoint.
AtomBits extendCandidate(Checker& ch, AtomBits M, size_t cap) {
  if (!ch.lazyAtomHeads) return M;
  for (size_t round = 0; round < cap; ++round) {
    M.resize(ch.table.size(), false);
    HTInterpretation it = HTInterpretation::total(M);
    bool changed = false;
    for (const auto& r : ch.g.rules) {
      if (r.lazy.empty()) continue;
      if (r.closed.head.kind != Head::Kind::Atom) continue;
      auto env = ch.g.envFor(r, ch.table, M);
      Evaluator ev(ch.table, it, &env);
      bool defined = true;
      Rule resolved = resolveLazyAtT(r, ev, defined);
      if (!defined) continue;
      if (satRuleBody(ev, resolved, World::T) != Sat3::True) continue;
      if (!resolved.head.atom->ground()) continue;
      int id = ch.table.intern(*resolved.head.atom);
      if (static_cast<size_t>(id) >= M.size()) M.resize(id + 1, false);
      if (!M[id]) {
        M[id] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return M;
}

bool isEquilibrium(Checker& ch, const AtomBits& Mbits, const std::vector<int>& forced,
                   const SolveConfig& cfg) {
  AtomBits M = Mbits;
  uint32_t ep = 0;
  Checker::Ctx ctx;
  if (ch.staticPath) {
    // fact rules are excluded from the compiled core set
    for (int id : forced)
      if (!(static_cast<size_t>(id) < M.size() && M[id])) return false;
    ep = ch.beginCandidate(M);
    if (!ch.staticModelAt(M, M, ep, World::H)) return false;
  } else {
    ctx = ch.prepare(Mbits);
    if (!ctx.usable) return false;
    M.resize(ch.table.size(), false);
    if (ch.htModelAt(ctx, M, M, World::H) != Sat3::True) return false;
  }

  // minimality: proper subsets may drop any non-forced atom
  std::vector<int> free;
  for (size_t i = 0; i < M.size(); ++i)
    if (M[i] && !std::binary_search(forced.begin(), forced.end(), static_cast<int>(i)))
      free.push_back(static_cast<int>(i));
  if (free.size() > 62)
    throw BudgetError("minimality check over " + std::to_string(free.size()) +
                      " free atoms exceeds the subset budget");
  if (free.empty()) return true;  // proper subsets would drop forced atoms only
  uint64_t full = (uint64_t{1} << free.size()) - 1;
  AtomBits here = M;
  for (uint64_t sub = full - 1;; --sub) {
    for (size_t k = 0; k < free.size(); ++k)
      here[free[k]] = (sub >> k) & 1;
    bool blocks;
    if (ch.staticPath) {
      blocks = ch.staticModelAt(here, M, ep, World::H, ++ch.hEpochCounter);
    } else {
      Sat3 s = ch.htModelAt(ctx, here, M, World::H);
      blocks = cfg.mode == EqMode::Strong ? s != Sat3::False : s == Sat3::True;
    }
    if (blocks) return false;
    if (sub == 0) break;
  }
  return true;
}

// Definite programs: atom heads, no negation. Body atoms are instantiated
// by matching against the interpretation rather than by static grounding, so
// derived values reach every rule.
bool definiteApplicable(const GroundProgram& g) {
  if (g.source.rules.empty()) return false;
  for (const auto& r : g.source.rules) {
    if (r.head.kind != Head::Kind::Atom) return false;
    for (const auto& lit : r.body) {
      if (lit.negated) return false;
      if (lit.isAggregate()) return false;
    }
  }
  for (const auto& r : g.rules)
    if (!r.infiniteVars.empty()) return false;
  return true;
}

// One source rule prepared for dynamic instantiation.
struct DefRule {
  const Rule* src = nullptr;
  Rule closed;
  std::vector<LazyBinding> lazy;
  std::set<std::string> deferred;
  std::map<std::string, std::vector<const Semiring*>> localSorts;
  std::vector<size_t> atomIdx;  // positions of positive body atoms
};

struct DefiniteEngine {
  const GroundProgram& g;
  const SolveConfig& cfg;
  AtomTable table;
  std::vector<DefRule> rules;

  DefiniteEngine(const GroundProgram& gp, const SolveConfig& c) : g(gp), cfg(c) {
    for (size_t i = 0; i < g.base.size(); ++i)
      table.intern(g.base.atom(static_cast<int>(i)));
    for (const auto& r : g.source.rules) {
      DefRule dr;
      dr.src = &r;
      dr.closed = sigmaClosure(r);
      dr.lazy = deferredBindings(r);
      for (const auto& lb : dr.lazy) dr.deferred.insert(lb.var);
      auto sorts = variableSorts(r);
      for (const auto& v : r.locals) {
        auto it = sorts.find(v);
        dr.localSorts[v] =
            it == sorts.end() ? std::vector<const Semiring*>{} : it->second;
      }
      for (size_t i = 0; i < r.body.size(); ++i)
        if (r.body[i].isAtom()) dr.atomIdx.push_back(i);
      rules.push_back(std::move(dr));
    }
  }

  static bool unify(const Atom& pattern, const Atom& ground, Subst& s) {
    if (pattern.pred != ground.pred || pattern.args.size() != ground.args.size())
      return false;
    std::vector<std::pair<std::string, bool>> added;
    for (size_t i = 0; i < pattern.args.size(); ++i) {
      const Term& pt = pattern.args[i];
      const Term& gt = ground.args[i];
      if (!pt.isVar()) {
        if (!(pt == gt)) {
          for (auto& [v, _] : added) s.erase(v);
          return false;
        }
        continue;
      }
      auto it = s.find(pt.name());
      if (it != s.end()) {
        if (!(it->second == gt)) {
          for (auto& [v, _] : added) s.erase(v);
          return false;
        }
      } else {
        s[pt.name()] = gt;
        added.push_back({pt.name(), true});
      }
    }
    return true;
  }

  // Derives the heads of instances whose bodies hold at (here, there, side);
  // bindings are pinned to their T-world values.
  void fire(const DefRule& dr, const AtomBits& here, const AtomBits& there,
            World side, AtomBits& out) {
    // per-predicate candidates visible at the matching world
    const AtomBits& visible = side == World::H ? here : there;
    std::vector<std::vector<int>> cands(dr.atomIdx.size());
    for (size_t k = 0; k < dr.atomIdx.size(); ++k) {
      const Atom& pat = *dr.src->body[dr.atomIdx[k]].atom;
      for (size_t id = 0; id < visible.size(); ++id) {
        if (!visible[id]) continue;
        const Atom& a = table.atom(static_cast<int>(id));
        if (a.pred == pat.pred && a.args.size() == pat.args.size())
          cands[k].push_back(static_cast<int>(id));
      }
      if (cands[k].empty()) return;
    }
    HTInterpretation ht(here, there);
    HTInterpretation totalThere = HTInterpretation::total(there);
    RangeEnv env = buildRanges(dr.localSorts, g.domain, table, there);

    std::function<void(size_t, Subst&)> rec = [&](size_t k, Subst& s) {
      if (k == dr.atomIdx.size()) {
        Subst full = s;
        // resolve the deferred bindings at the T world
        for (const auto& lb : dr.lazy) {
          const auto& cons = *dr.closed.body[lb.bodyIndex].cons;
          Evaluator ev(table, totalThere, &env);
          auto body = substitute(cons.body, full);
          EvalResult v = ev.evalWeighted(body, *cons.ring, World::T);
          if (!v) return;
          full[lb.var] = Term::value(*v);
        }
        // all body constraints must hold at the required point
        for (const auto& lit : dr.src->body) {
          if (!lit.isConstraint()) continue;
          Rule instLit;
          instLit.body.push_back(Literal{
              false, std::nullopt,
              substitute(dr.closed.body[&lit - dr.src->body.data()].cons, full),
              std::nullopt});
          Evaluator ev(table, ht, &env);
          if (satRuleBody(ev, instLit, side) != Sat3::True) return;
        }
        Atom head = substitute(*dr.src->head.atom, full);
        if (!head.ground()) return;
        int id = table.intern(head);
        if (static_cast<size_t>(id) >= out.size()) out.resize(id + 1, false);
        out[id] = true;
        return;
      }
      const Atom& pat = *dr.src->body[dr.atomIdx[k]].atom;
      for (int id : cands[k]) {
        Subst saved = s;
        if (unify(pat, table.atom(id), s)) rec(k + 1, s);
        s = std::move(saved);
      }
    };
    Subst s;
    rec(0, s);
  }

  // Least fixpoint of the one-step operator; rounds recompute from scratch
  // so non-monotone value bindings settle stratum by stratum. When
  // thereFixed is set the derivation runs on the H side against it.
  std::optional<AtomBits> closure(World side, const AtomBits* thereFixed) {
    AtomBits cur(table.size(), false);
    for (size_t round = 0; round < cfg.closureRounds; ++round) {
      AtomBits next(table.size(), false);
      AtomBits thereB = thereFixed ? *thereFixed : cur;
      thereB.resize(table.size(), false);
      AtomBits hereB = cur;
      hereB.resize(table.size(), false);
      for (const auto& dr : rules) fire(dr, hereB, thereB, side, next);
      if (table.size() > cfg.candidateBudget)
        throw BudgetError("value closure exceeded the atom budget");
      cur.resize(table.size(), false);
      next.resize(table.size(), false);
      if (next == cur) return cur;
      cur = std::move(next);
    }
    return std::nullopt;
  }

  // Rule satisfaction at (here, there, H): only joined instances can have a
  // true body, so checking them is complete.
  bool htModel(const AtomBits& here, const AtomBits& there) {
    for (World side : {World::T, World::H}) {
      const AtomBits& h = side == World::H ? here : there;
      for (const auto& dr : rules) {
        AtomBits heads(table.size(), false);
        fire(dr, h, there, side, heads);
        for (size_t id = 0; id < heads.size(); ++id)
          if (heads[id] && !(id < h.size() && h[id])) return false;
      }
    }
    return true;
  }
};

}  // namespace

CompiledFormula::CompiledFormula(const FormulaPtr& f, const AtomTable& table) {
  RangeEnv empty;
  CompileCtx ctx{table, empty, {}, nullptr, nullptr};
  impl_ = std::shared_ptr<void>(compileF(f, ctx).release(), [](void* p) {
    delete static_cast<CF*>(p);
  });
}

bool CompiledFormula::sat(const HTInterpretation& I, World w) const {
  Bits bits{&I.here(), &I.there()};
  return satCF(*static_cast<const CF*>(impl_.get()), bits, w);
}

namespace {
struct CWHolder {
  std::unique_ptr<CW> tree;
  FastRing fast = FastRing::None;
};
}  // namespace

CompiledWeighted::CompiledWeighted(const WeightedPtr& w, const Semiring& ring,
                                   const AtomTable& table, const RangeEnv* env)
    : ring_(&ring) {
  RangeEnv empty;
  CompileCtx ctx{table, env ? *env : empty, {}, nullptr, nullptr};
  auto holder = std::make_shared<CWHolder>();
  holder->tree = compileW(w, ring, ctx);
  const std::string& n = ring.name();
  if ((n == "bool" || n == "nat" || n == "int") &&
      fastEligible(*holder->tree, n == "int")) {
    holder->fast = n == "bool" ? FastRing::Bool : FastRing::IntPlain;
    prepareFastConsts(*holder->tree);
  }
  impl_ = std::move(holder);
}

Value CompiledWeighted::eval(const HTInterpretation& I, World w) const {
  Bits bits{&I.here(), &I.there()};
  const auto& h = *static_cast<const CWHolder*>(impl_.get());
  if (h.fast != FastRing::None)
    return Value::ofInt(evalFastI(*h.tree, bits, w, h.fast == FastRing::Bool));
  return evalCW(*h.tree, *ring_, bits, w);
}

bool checkHtModel(const GroundProgram& g, const std::vector<Atom>& here,
                  const std::vector<Atom>& there) {
  AtomTable table;
  for (size_t i = 0; i < g.base.size(); ++i) table.intern(g.base.atom(static_cast<int>(i)));
  AtomBits t = bitsFor(table, there, &table);
  AtomBits h = bitsFor(table, here, &table);
  h.resize(table.size(), false);
  t.resize(table.size(), false);
  HTInterpretation ht(h, t);
  for (const auto& r : g.rules) {
    auto env = g.envFor(r, table, t);
    Evaluator ev(table, ht, &env);
    if (r.lazy.empty()) {
      if (satRule(ev, r.closed, World::H) != Sat3::True) return false;
      continue;
    }
    for (const auto& inst : resolveLazy(r, ev)) {
      Evaluator evi(table, ht, &env);
      if (satRule(evi, inst, World::H) != Sat3::True) return false;
    }
  }
  return true;
}

bool checkEquilibrium(const GroundProgram& g, const std::vector<Atom>& M,
                      const SolveConfig& cfg) {
  Checker ch(g, cfg);
  ch.finishSetup();
  AtomBits bits = bitsFor(ch.table, M, &ch.table);
  bits.resize(ch.table.size(), false);
  auto forced = ch.forcedAtoms();
  return isEquilibrium(ch, bits, forced, cfg);
}

SolveResult enumerateEquilibrium(const GroundProgram& g, const SolveConfig& cfg) {
  SolveResult res;

  if (definiteApplicable(g)) {
    DefiniteEngine eng(g, cfg);
    auto closure = eng.closure(World::T, nullptr);
    if (closure) {
      AtomBits M = *closure;
      M.resize(eng.table.size(), false);
      bool model = eng.htModel(M, M);
      // least-model certificate: the H-side closure against M reproduces M
      auto hClosure = eng.closure(World::H, &M);
      if (model && hClosure) {
        AtomBits J = *hClosure;
        J.resize(eng.table.size(), false);
        AtomBits M2 = M;
        M2.resize(eng.table.size(), false);
        if (J == M2) {
          res.models.push_back(atomsOf(eng.table, M2));
          res.definitePath = true;
          if (cfg.maxModels && res.models.size() > *cfg.maxModels)
            res.models.resize(*cfg.maxModels);
          return res;
        }
      }
    }
    // enumeration remains the fallback when the closure did not certify
  }

  Checker ch(g, cfg);
  ch.finishSetup();
  auto forced = ch.forcedAtoms();
  size_t n = ch.table.size();
  std::vector<int> free;
  for (size_t i = 0; i < n; ++i)
    if (!std::binary_search(forced.begin(), forced.end(), static_cast<int>(i)))
      free.push_back(static_cast<int>(i));
  if (free.size() > 62 ||
      (uint64_t{1} << std::min<size_t>(free.size(), 62)) > cfg.candidateBudget)
    throw BudgetError("candidate space 2^" + std::to_string(free.size()) +
                      " exceeds the enumeration budget");

  std::set<std::vector<Atom>> seenCandidates;
  std::vector<std::vector<Atom>> models;
  bool extensionPossible = ch.lazyAtomHeads;

  AtomBits base(n, false);
  for (int id : forced) base[id] = true;

  // candidate checking is embarrassingly parallel on the static path; each
  // worker compiles its own rule set and takes a stride of the (cardinality,
  // lexicographic) candidate stream
  int threads = cfg.threads;
  if (threads > 1 && ch.staticPath && !extensionPossible) {
    std::vector<AtomBits> candidates;
    for (size_t k = 0; k <= free.size(); ++k) {
      std::vector<size_t> comb(k);
      for (size_t i = 0; i < k; ++i) comb[i] = i;
      for (;;) {
        AtomBits M = base;
        for (size_t i : comb) M[free[i]] = true;
        candidates.push_back(std::move(M));
        if (k == 0) break;
        size_t i = k;
        while (i > 0 && comb[i - 1] == free.size() - (k - i) - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
      }
    }
    std::vector<std::vector<std::vector<Atom>>> found(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        Checker worker(g, cfg);
        worker.finishSetup();
        auto workerForced = worker.forcedAtoms();
        for (size_t i = t; i < candidates.size(); i += threads) {
          if (isEquilibrium(worker, candidates[i], workerForced, cfg))
            found[t].push_back(atomsOf(worker.table, candidates[i]));
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& part : found)
      for (auto& m : part) models.push_back(std::move(m));
  } else {
    // subsets by (cardinality, lexicographic id order)
    for (size_t k = 0; k <= free.size(); ++k) {
      std::vector<size_t> comb(k);
      for (size_t i = 0; i < k; ++i) comb[i] = i;
      for (;;) {
        AtomBits M = base;
        for (size_t i : comb) M[free[i]] = true;
        AtomBits ext = extensionPossible ? extendCandidate(ch, M, cfg.closureRounds)
                                         : std::move(M);
        ext.resize(ch.table.size(), false);
        bool fresh =
            !extensionPossible || seenCandidates.insert(atomsOf(ch.table, ext)).second;
        if (fresh) {
          if (isEquilibrium(ch, ext, forced, cfg)) {
            models.push_back(atomsOf(ch.table, ext));
            if (!extensionPossible && cfg.maxModels && models.size() >= *cfg.maxModels) {
              res.models = std::move(models);
              return res;
            }
          }
        }
        if (k == 0) break;
        // next combination
        size_t i = k;
        while (i > 0 && comb[i - 1] == free.size() - (k - i) - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
      }
    }
  }

  std::sort(models.begin(), models.end(), modelLess);
  models.erase(std::unique(models.begin(), models.end()), models.end());
  if (cfg.maxModels && models.size() > *cfg.maxModels) models.resize(*cfg.maxModels);
  res.models = std::move(models);
  return res;
}

SEResult strongEquivalence(const Program& p1, const Program& p2, const SolveConfig& cfg) {
  Program d1 = desugarProgram(p1);
  Program d2 = desugarProgram(p2);
  Program unio;
  unio.rules = d1.rules;
  for (const auto& r : d2.rules) unio.rules.push_back(r);
  unio.declaredDomain = d1.declaredDomain;
  for (const auto& c : d2.declaredDomain) unio.declaredDomain.insert(c);
  Domain dom = herbrandDomain(unio, {});

  GroundProgram g1 = groundProgram(d1, {}, {}, &dom);
  GroundProgram g2 = groundProgram(d2, {}, {}, &dom);

  AtomTable table;
  for (size_t i = 0; i < g1.base.size(); ++i) table.intern(g1.base.atom(static_cast<int>(i)));
  for (size_t i = 0; i < g2.base.size(); ++i) table.intern(g2.base.atom(static_cast<int>(i)));
  size_t n = table.size();
  if (2 * n > 40)
    throw BudgetError("strong equivalence over " + std::to_string(n) +
                      " atoms exceeds the enumeration budget (2*n <= 40)");

  auto htSat = [&table](const GroundProgram& g, const AtomBits& h,
                        const AtomBits& t) -> bool {
    HTInterpretation ht(h, t);
    for (const auto& r : g.rules) {
      auto env = g.envFor(r, table, t);
      Evaluator ev(table, ht, &env);
      if (r.lazy.empty()) {
        if (satRule(ev, r.closed, World::H) != Sat3::True) return false;
        continue;
      }
      bool defined = true;
      Rule inst = resolveLazyAtT(r, ev, defined);
      if (!defined) return false;
      Evaluator evi(table, ht, &env);
      if (satRule(evi, inst, World::H) != Sat3::True) return false;
    }
    return true;
  };

  // all pairs here <= there over the union base, there by (card, lex)
  std::vector<uint64_t> masks;
  for (uint64_t m = 0; m < (uint64_t{1} << n); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](uint64_t a, uint64_t b) {
    int ca = __builtin_popcountll(a), cb = __builtin_popcountll(b);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  auto toBits = [n](uint64_t m) {
    AtomBits b(n, false);
    for (size_t i = 0; i < n; ++i)
      if (m & (uint64_t{1} << i)) b[i] = true;
    return b;
  };
  for (uint64_t t : masks) {
    uint64_t h = 0;  // submasks of t in ascending order
    for (;;) {
      AtomBits hb = toBits(h), tb = toBits(t);
      bool s1 = htSat(g1, hb, tb);
      bool s2 = htSat(g2, hb, tb);
      if (s1 != s2) {
        SEResult r;
        r.equivalent = false;
        r.witness = {atomsOf(table, hb), atomsOf(table, tb)};
        r.firstSatisfiesWitness = s1;
        return r;
      }
      if (h == t) break;
      h = (h - t) & t;
    }
  }
  return SEResult{};
}

}  // namespace acsolve

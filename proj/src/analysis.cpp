#include "acsolve/analysis.hpp"

#include <functional>
#include <json.hpp>
#include <map>
#include <sstream>

#include "acsolve/printer.hpp"

namespace acsolve {

const char* fragmentName(Fragment f) {
  switch (f) {
    case Fragment::Ground: return "ground";
    case Fragment::SafeDecidable: return "safe-decidable";
    case Fragment::SafeGeneral: return "safe-general";
    case Fragment::Unsafe: return "unsafe";
  }
  return "?";
}

namespace {

using VarSet = std::set<std::string>;

bool subset(const VarSet& a, const VarSet& b) {
  for (const auto& x : a)
    if (!b.count(x)) return false;
  return true;
}

// not not f at the formula level
const FormulaPtr* unwrapNotNot(const FormulaPtr& f) {
  if (f->isNegation() && f->lhs->isNegation()) return &f->lhs->lhs;
  return nullptr;
}

// alpha ->_R zero ->_R zero at the weighted level
const WeightedPtr* unwrapWNotNot(const WeightedPtr& w, const Semiring& ring) {
  auto isZeroConst = [&ring](const WeightedPtr& x) {
    return x->kind == Weighted::Kind::Const && ring.contains(x->k) &&
           ring.compare(x->k, ring.zero()) == 0;
  };
  if (w->kind != Weighted::Kind::Implies || !isZeroConst(w->rhs)) return nullptr;
  const WeightedPtr& inner = w->lhs;
  if (inner->kind != Weighted::Kind::Implies || !isZeroConst(inner->rhs)) return nullptr;
  return &inner->lhs;
}

struct SdiChecker {
  const VarSet& locals;  // the full local set the side conditions refer to
  const Semiring* ring;  // for the weighted not-not pattern; may be null
  std::map<std::pair<const void*, std::string>, bool> memo;

  static std::string key(const VarSet& x) {
    std::string k;
    for (const auto& v : x) k += v + ",";
    return k;
  }

  bool formula(const FormulaPtr& f, const VarSet& x) {
    if (x.empty()) return groundFormula(f);
    auto mk = std::make_pair(static_cast<const void*>(f.get()), key(x));
    auto it = memo.find(mk);
    if (it != memo.end()) return it->second;
    bool r = formulaImpl(f, x);
    memo[mk] = r;
    return r;
  }

  // With nothing left to bind, derivability only requires that the grammar
  // bottoms out; guarded connectives over atoms and bottom all qualify.
  bool groundFormula(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Bottom:
      case Formula::Kind::Atomic:
        return true;
      case Formula::Kind::Or:
      case Formula::Kind::And:
        return groundFormula(f->lhs) && groundFormula(f->rhs);
      case Formula::Kind::Implies:
        if (auto inner = unwrapNotNot(f)) return groundFormula(*inner);
        return false;
      case Formula::Kind::Constraint:
        return false;
    }
    return false;
  }

  bool formulaImpl(const FormulaPtr& f, const VarSet& x) {
    switch (f->kind) {
      case Formula::Kind::Bottom:
        return true;
      case Formula::Kind::Atomic: {
        VarSet av;
        collectVars(f->atom, av);
        return subset(x, av);
      }
      case Formula::Kind::Or:
        return formula(f->lhs, x) && formula(f->rhs, x);
      case Formula::Kind::And: {
        // phi(X) ^ psi(X') with psi arbitrary and X' <= X
        if (formula(f->lhs, x)) {
          VarSet rv;
          collectVars(f->rhs, rv);
          VarSet rloc;
          for (const auto& v : rv)
            if (locals.count(v)) rloc.insert(v);
          if (subset(rloc, x)) return true;
        }
        // phi(Y) ^ phi(Z) with Y u Z = X
        return splitSearch(x, [&](const VarSet& y, const VarSet& z) {
          return formula(f->lhs, y) && formula(f->rhs, z);
        });
      }
      case Formula::Kind::Implies:
        if (auto inner = unwrapNotNot(f)) return formula(*inner, x);
        return false;
      case Formula::Kind::Constraint:
        return false;
    }
    return false;
  }

  bool weighted(const WeightedPtr& w, const VarSet& x) {
    if (x.empty()) return groundWeighted(w);
    auto mk = std::make_pair(static_cast<const void*>(w.get()), "w:" + key(x));
    auto it = memo.find(mk);
    if (it != memo.end()) return it->second;
    bool r = weightedImpl(w, x);
    memo[mk] = r;
    return r;
  }

  bool groundWeighted(const WeightedPtr& w) {
    switch (w->kind) {
      case Weighted::Kind::Const:
      case Weighted::Kind::Var:
        return true;
      case Weighted::Kind::Embed:
        return groundFormula(w->phi);
      case Weighted::Kind::Plus:
      case Weighted::Kind::Times:
        return groundWeighted(w->lhs) && groundWeighted(w->rhs);
      case Weighted::Kind::Neg:
      case Weighted::Kind::Inv:
        return groundWeighted(w->lhs);
      case Weighted::Kind::Implies:
        if (ring) {
          if (auto inner = unwrapWNotNot(w, *ring)) return groundWeighted(*inner);
        }
        return false;
      default:
        return false;
    }
  }

  bool weightedImpl(const WeightedPtr& w, const VarSet& x) {
    switch (w->kind) {
      case Weighted::Kind::Const:
      case Weighted::Kind::Var:
        return false;  // a constant or bare value slot binds nothing
      case Weighted::Kind::Embed:
        return formula(w->phi, x);
      case Weighted::Kind::Plus:
        return weighted(w->lhs, x) && weighted(w->rhs, x);
      case Weighted::Kind::Times: {
        // alpha(X) * beta(X') with beta arbitrary and X' <= X
        if (weighted(w->lhs, x)) {
          VarSet rv;
          freeVars(w->rhs, rv);
          VarSet rloc;
          for (const auto& v : rv)
            if (locals.count(v)) rloc.insert(v);
          if (subset(rloc, x)) return true;
        }
        return splitSearch(x, [&](const VarSet& y, const VarSet& z) {
          return weighted(w->lhs, y) && weighted(w->rhs, z);
        });
      }
      case Weighted::Kind::Neg:
      case Weighted::Kind::Inv:
        return weighted(w->lhs, x);
      case Weighted::Kind::Implies:
        if (ring) {
          if (auto inner = unwrapWNotNot(w, *ring)) return weighted(*inner, x);
        }
        return false;
      default:
        return false;  // Sum/Prod/Conditional do not occur in rule constraints
    }
  }

  // All covers Y u Z = X; each variable goes left, right, or both.
  template <typename F>
  bool splitSearch(const VarSet& x, F&& accept) {
    std::vector<std::string> vars(x.begin(), x.end());
    size_t n = vars.size();
    if (n > 10) return false;  // guard; real rules never get close
    std::vector<int> choice(n, 0);
    for (;;) {
      VarSet y, z;
      for (size_t i = 0; i < n; ++i) {
        if (choice[i] == 0 || choice[i] == 2) y.insert(vars[i]);
        if (choice[i] == 1 || choice[i] == 2) z.insert(vars[i]);
      }
      if (accept(y, z)) return true;
      size_t i = 0;
      while (i < n && choice[i] == 2) choice[i++] = 0;
      if (i == n) return false;
      ++choice[i];
    }
  }
};

VarSet localsOf(const Rule& r, const WeightedPtr& body) {
  VarSet fv;
  freeVars(body, fv);
  VarSet out;
  for (const auto& v : fv)
    if (r.locals.count(v)) out.insert(v);
  return out;
}

void flattenTimes(const WeightedPtr& w, std::vector<WeightedPtr>& out) {
  if (w->kind == Weighted::Kind::Times) {
    flattenTimes(w->lhs, out);
    out.push_back(w->rhs);
    return;
  }
  out.push_back(w);
}

bool atomsLocallyGround(const WeightedPtr& w, const VarSet& locals) {
  if (!w) return true;
  if (w->kind == Weighted::Kind::Embed) {
    VarSet vs;
    collectVars(w->phi, vs);
    for (const auto& v : vs)
      if (locals.count(v)) return false;
    return true;
  }
  if (w->kind == Weighted::Kind::Sum || w->kind == Weighted::Kind::Prod ||
      w->kind == Weighted::Kind::Conditional)
    return false;
  return atomsLocallyGround(w->lhs, locals) && atomsLocallyGround(w->rhs, locals);
}

// Splits an implication into premise/conclusion, unwrapping Embed.
bool implicationParts(const WeightedPtr& w, WeightedPtr& prem, WeightedPtr& concl) {
  if (w->kind == Weighted::Kind::Implies) {
    prem = w->lhs;
    concl = w->rhs;
    return true;
  }
  if (w->kind == Weighted::Kind::Embed && w->phi->kind == Formula::Kind::Implies &&
      !w->phi->isNegation()) {
    prem = Weighted::embed(w->phi->lhs);
    concl = Weighted::embed(w->phi->rhs);
    return true;
  }
  return false;
}

bool notNotOf(const WeightedPtr& w, const Semiring& ring, WeightedPtr& inner) {
  if (w->kind == Weighted::Kind::Embed) {
    if (auto f = unwrapNotNot(w->phi)) {
      inner = Weighted::embed(*f);
      return true;
    }
    return false;
  }
  if (auto i = unwrapWNotNot(w, ring)) {
    inner = *i;
    return true;
  }
  return false;
}

}  // namespace

bool checkSdi(const WeightedPtr& alpha, const std::set<std::string>& vars) {
  if (vars.empty()) return true;
  SdiChecker c{vars, nullptr, {}};
  return c.weighted(alpha, vars);
}

bool checkSdi(const FormulaPtr& phi, const std::set<std::string>& vars) {
  if (vars.empty()) return true;
  SdiChecker c{vars, nullptr, {}};
  return c.formula(phi, vars);
}

bool checkDomainRestricted(const AlgebraicConstraint& c,
                           const std::set<std::string>& locals) {
  std::vector<WeightedPtr> factors;
  flattenTimes(c.body, factors);

  // gamma-only degenerate instance
  bool allGround = true;
  for (const auto& f : factors)
    if (!atomsLocallyGround(f, locals)) allGround = false;
  if (allGround) return true;

  if (factors.size() < 2) return false;
  WeightedPtr guard;
  if (!notNotOf(factors[0], *c.ring, guard)) return false;
  WeightedPtr prem, concl;
  if (!implicationParts(factors[1], prem, concl)) return false;
  if (!equal(guard, prem)) return false;

  VarSet xs;
  {
    VarSet fv;
    freeVars(c.body, fv);
    for (const auto& v : fv)
      if (locals.count(v)) xs.insert(v);
  }
  SdiChecker chk{locals, c.ring, {}};
  if (!xs.empty() && !chk.weighted(guard, xs)) return false;
  if (!xs.empty() && !chk.weighted(concl, xs)) return false;
  for (size_t i = 2; i < factors.size(); ++i)
    if (!atomsLocallyGround(factors[i], locals)) return false;
  return true;
}

namespace {

bool bindingCanInvent(const AlgebraicConstraint& c) {
  if (!c.lhs.isVar() || c.cmp != CmpOp::Eq) return false;
  std::function<bool(const WeightedPtr&)> hasOp = [&](const WeightedPtr& w) -> bool {
    if (!w) return false;
    switch (w->kind) {
      case Weighted::Kind::Plus:
      case Weighted::Kind::Times:
      case Weighted::Kind::Neg:
      case Weighted::Kind::Inv:
      case Weighted::Kind::Sum:
      case Weighted::Kind::Prod:
        return true;
      case Weighted::Kind::Implies:
        return hasOp(w->lhs) || hasOp(w->rhs);
      default:
        return false;
    }
  };
  return hasOp(c.body);
}

bool varInAtoms(const Rule& r, const std::string& x) {
  bool found = false;
  auto scanAtom = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (t.isVar() && t.name() == x) found = true;
  };
  std::function<void(const FormulaPtr&)> sf = [&](const FormulaPtr& f) {
    if (!f) return;
    if (f->kind == Formula::Kind::Atomic) scanAtom(f->atom);
    sf(f->lhs);
    sf(f->rhs);
  };
  std::function<void(const WeightedPtr&)> sw = [&](const WeightedPtr& v) {
    if (!v) return;
    if (v->kind == Weighted::Kind::Embed || v->kind == Weighted::Kind::Conditional)
      sf(v->phi);
    sw(v->lhs);
    sw(v->rhs);
  };
  if (r.head.kind == Head::Kind::Atom) scanAtom(*r.head.atom);
  if (r.head.kind == Head::Kind::Disjunction)
    for (const auto& a : r.head.disj) scanAtom(a);
  if (r.head.kind == Head::Kind::Constraint) sw(r.head.cons->body);
  for (const auto& lit : r.body) {
    if (lit.isAtom()) scanAtom(*lit.atom);
    if (lit.isConstraint()) sw(lit.cons->body);
  }
  return found;
}

}  // namespace

bool checkValueInvention(const Program& p) {
  for (const auto& r : p.rules) {
    for (const auto& lit : r.body) {
      if (!lit.isConstraint() || lit.negated) continue;
      if (bindingCanInvent(*lit.cons) && varInAtoms(r, lit.cons->lhs.name())) return true;
    }
  }
  return false;
}

AnalysisReport checkSafety(const Program& p) {
  AnalysisReport report;
  bool allGround = true;

  for (const auto& rule : p.rules) {
    RuleAnalysis ra;
    if (!rule.globals.empty() || !rule.locals.empty()) allGround = false;

    // (i) every weighted formula syntactically domain independent w.r.t. its
    // local variables
    auto checkBody = [&](const AlgebraicConstraint& c) {
      VarSet loc = localsOf(rule, c.body);
      SdiChecker chk{rule.locals, c.ring, {}};
      bool ok = loc.empty() || chk.weighted(c.body, loc);
      ra.formulas.push_back({printWeighted(c.body), ok});
      if (!ok && ra.safe) {
        std::string vars;
        for (const auto& v : loc) vars += (vars.empty() ? "" : ",") + v;
        ra.safe = false;
        ra.violation = "weighted formula '" + printWeighted(c.body) +
                       "' is not syntactically domain independent w.r.t. {" + vars + "}";
      }
    };
    if (rule.head.kind == Head::Kind::Constraint) checkBody(*rule.head.cons);
    for (const auto& lit : rule.body)
      if (lit.isConstraint()) checkBody(*lit.cons);

    // (ii) every global variable is bound by a positive body atom or by a
    // non-reoccurring equality constraint
    for (const auto& x : rule.globals) {
      bool bound = false;
      for (const auto& lit : rule.body) {
        if (lit.negated) continue;
        if (lit.isAtom()) {
          VarSet av;
          collectVars(*lit.atom, av);
          if (av.count(x)) {
            bound = true;
            break;
          }
        } else if (lit.isConstraint()) {
          const auto& c = *lit.cons;
          if (c.lhs.isVar() && c.lhs.name() == x && c.cmp == CmpOp::Eq) {
            bool reoccurs = false;
            for (const auto& other : rule.body) {
              if (!other.isConstraint()) continue;
              VarSet fv;
              freeVars(other.cons->body, fv);
              if (fv.count(x)) reoccurs = true;
            }
            if (!reoccurs) {
              bound = true;
              break;
            }
          }
        }
      }
      if (!bound) {
        if (ra.safe) {
          ra.safe = false;
          ra.violation = "global variable " + x + " has no binding body literal";
        }
        break;
      }
    }

    if (rule.head.kind == Head::Kind::Constraint) {
      ra.headConstraint = true;
      ra.headDomainRestricted = checkDomainRestricted(*rule.head.cons, rule.locals);
    }
    report.rules.push_back(std::move(ra));
  }

  report.valueInvention = checkValueInvention(p);

  bool allSafe = report.allSafe();
  bool headsDr = true;
  for (const auto& ra : report.rules)
    if (ra.headConstraint && !ra.headDomainRestricted) headsDr = false;

  if (allGround)
    report.fragment = Fragment::Ground;
  else if (allSafe && !report.valueInvention && headsDr)
    report.fragment = Fragment::SafeDecidable;
  else if (allSafe)
    report.fragment = Fragment::SafeGeneral;
  else
    report.fragment = Fragment::Unsafe;
  report.finitelyGroundable =
      report.fragment == Fragment::Ground || report.fragment == Fragment::SafeDecidable;
  return report;
}

std::string AnalysisReport::toText() const {
  std::ostringstream out;
  out << "fragment: " << fragmentName(fragment) << '\n';
  out << "value_invention: " << (valueInvention ? "yes" : "no") << '\n';
  out << "finitely_groundable: " << (finitelyGroundable ? "yes" : "no") << '\n';
  for (size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    out << "rule " << i + 1 << ": " << (r.safe ? "safe" : "UNSAFE");
    if (!r.safe) out << " (" << r.violation << ")";
    if (r.headConstraint)
      out << "; head constraint "
          << (r.headDomainRestricted ? "domain-restricted" : "not domain-restricted");
    out << '\n';
    for (const auto& fc : r.formulas)
      out << "  formula '" << fc.text << "': " << (fc.sdi ? "sdi" : "not sdi") << '\n';
  }
  return out.str();
}

std::string AnalysisReport::toJson() const {
  nlohmann::json j;
  j["fragment"] = fragmentName(fragment);
  j["value_invention"] = valueInvention;
  j["finitely_groundable"] = finitelyGroundable;
  j["rules"] = nlohmann::json::array();
  for (const auto& r : rules) {
    nlohmann::json jr;
    jr["safe"] = r.safe;
    if (!r.safe) jr["violation"] = r.violation;
    if (r.headConstraint) jr["head_domain_restricted"] = r.headDomainRestricted;
    jr["formulas"] = nlohmann::json::array();
    for (const auto& fc : r.formulas)
      jr["formulas"].push_back({{"text", fc.text}, {"sdi", fc.sdi}});
    j["rules"].push_back(std::move(jr));
  }
  return j.dump(2);
}

}  // namespace acsolve

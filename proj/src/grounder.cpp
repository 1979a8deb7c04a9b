#include "acsolve/grounder.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "acsolve/printer.hpp"

namespace acsolve {

namespace {

void addValue(std::set<Value>& vs, const Value& v) { vs.insert(v); }

void scanTerm(const Term& t, std::set<std::string>& cs, std::set<Value>& vs) {
  if (t.isConstant()) cs.insert(t.name());
  if (t.isValue()) addValue(vs, t.val());
}

void scanAtom(const Atom& a, std::set<std::string>& cs, std::set<Value>& vs) {
  for (const auto& t : a.args) scanTerm(t, cs, vs);
}

void scanFormula(const FormulaPtr& f, std::set<std::string>& cs, std::set<Value>& vs);

void scanWeighted(const WeightedPtr& w, std::set<std::string>& cs, std::set<Value>& vs) {
  if (!w) return;
  switch (w->kind) {
    case Weighted::Kind::Const:
      addValue(vs, w->k);
      return;
    case Weighted::Kind::Var:
      return;
    case Weighted::Kind::Embed:
    case Weighted::Kind::Conditional:
      scanFormula(w->phi, cs, vs);
      scanWeighted(w->lhs, cs, vs);
      scanWeighted(w->rhs, cs, vs);
      return;
    default:
      scanWeighted(w->lhs, cs, vs);
      scanWeighted(w->rhs, cs, vs);
      return;
  }
}

void scanFormula(const FormulaPtr& f, std::set<std::string>& cs, std::set<Value>& vs) {
  if (!f) return;
  if (f->kind == Formula::Kind::Atomic) scanAtom(f->atom, cs, vs);
  if (f->kind == Formula::Kind::Constraint) {
    scanTerm(f->cons->lhs, cs, vs);
    scanWeighted(f->cons->body, cs, vs);
  }
  scanFormula(f->lhs, cs, vs);
  scanFormula(f->rhs, cs, vs);
}

void scanConstraint(const AlgebraicConstraint& c, std::set<std::string>& cs,
                    std::set<Value>& vs) {
  scanTerm(c.lhs, cs, vs);
  scanWeighted(c.body, cs, vs);
}

}  // namespace

Domain herbrandDomain(const Program& p, const std::vector<Atom>& edb) {
  std::set<std::string> cs(p.declaredDomain.begin(), p.declaredDomain.end());
  std::set<Value> vs;
  for (const auto& r : p.rules) {
    if (r.head.kind == Head::Kind::Atom) scanAtom(*r.head.atom, cs, vs);
    if (r.head.kind == Head::Kind::Disjunction)
      for (const auto& a : r.head.disj) scanAtom(a, cs, vs);
    if (r.head.kind == Head::Kind::Constraint) scanConstraint(*r.head.cons, cs, vs);
    for (const auto& lit : r.body) {
      if (lit.isAtom()) scanAtom(*lit.atom, cs, vs);
      if (lit.isConstraint()) scanConstraint(*lit.cons, cs, vs);
    }
  }
  for (const auto& a : edb) scanAtom(a, cs, vs);
  Domain d;
  d.constants.assign(cs.begin(), cs.end());
  d.values.assign(vs.begin(), vs.end());
  return d;
}

std::vector<Term> Domain::rangeFor(const std::vector<const Semiring*>& sort) const {
  std::vector<Term> out;
  if (sort.empty()) {
    for (const auto& c : constants) out.push_back(Term::constant(c));
    for (const auto& v : values) out.push_back(Term::value(v));
    return out;
  }
  std::set<Value> range;
  for (const auto& v : values) {
    std::optional<Value> cur = sort[0]->coerce(v);
    for (size_t i = 1; cur && i < sort.size(); ++i)
      if (!sort[i]->coerce(*cur)) cur = std::nullopt;
    if (cur) range.insert(*cur);
  }
  for (const auto& v : range) out.push_back(Term::value(v));
  return out;
}

std::vector<LazyBinding> deferredBindings(const Rule& r) {
  std::vector<LazyBinding> out;
  for (const auto& x : r.globals) {
    bool inAtom = false;
    for (const auto& lit : r.body) {
      if (lit.negated || !lit.isAtom()) continue;
      std::set<std::string> av;
      collectVars(*lit.atom, av);
      if (av.count(x)) inAtom = true;
    }
    if (inAtom) continue;
    bool inBodyFormula = false;
    for (const auto& lit : r.body) {
      if (!lit.isConstraint()) continue;
      std::set<std::string> fv;
      freeVars(lit.cons->body, fv);
      if (fv.count(x)) inBodyFormula = true;
    }
    if (inBodyFormula) continue;
    for (size_t i = 0; i < r.body.size(); ++i) {
      const auto& lit = r.body[i];
      if (lit.negated || !lit.isConstraint()) continue;
      if (lit.cons->lhs.isVar() && lit.cons->lhs.name() == x &&
          lit.cons->cmp == CmpOp::Eq) {
        out.push_back({x, i});
        break;
      }
    }
  }
  return out;
}

namespace {

void internAtoms(const Rule& instance, const Domain& dom, AtomTable& base) {
  // atoms whose arguments are fully ground enter the base directly; atoms
  // with remaining local variables are instantiated over the sort ranges
  auto sorts = variableSorts(instance);
  std::function<void(const Atom&)> blowup = [&](const Atom& a) {
    std::vector<size_t> varIdx;
    for (size_t i = 0; i < a.args.size(); ++i)
      if (a.args[i].isVar()) varIdx.push_back(i);
    if (varIdx.empty()) {
      base.intern(a);
      return;
    }
    std::vector<std::vector<Term>> ranges;
    for (size_t i : varIdx) {
      auto it = sorts.find(a.args[i].name());
      ranges.push_back(dom.rangeFor(it == sorts.end()
                                        ? std::vector<const Semiring*>{}
                                        : it->second));
      if (ranges.back().empty()) return;
    }
    std::vector<size_t> idx(varIdx.size(), 0);
    for (;;) {
      Atom g = a;
      for (size_t k = 0; k < varIdx.size(); ++k) g.args[varIdx[k]] = ranges[k][idx[k]];
      base.intern(g);
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == ranges[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  };
  std::function<void(const FormulaPtr&)> sf = [&](const FormulaPtr& f) {
    if (!f) return;
    if (f->kind == Formula::Kind::Atomic) blowup(f->atom);
    sf(f->lhs);
    sf(f->rhs);
  };
  std::function<void(const WeightedPtr&)> sw = [&](const WeightedPtr& w) {
    if (!w) return;
    if (w->kind == Weighted::Kind::Embed) sf(w->phi);
    sw(w->lhs);
    sw(w->rhs);
  };
  if (instance.head.kind == Head::Kind::Atom && instance.head.atom->ground())
    base.intern(*instance.head.atom);
  if (instance.head.kind == Head::Kind::Constraint) sw(instance.head.cons->body);
  for (const auto& lit : instance.body) {
    if (lit.isAtom() && lit.atom->ground()) base.intern(*lit.atom);
    if (lit.isConstraint()) sw(lit.cons->body);
  }
}

}  // namespace

GroundProgram groundProgram(const Program& p, const std::vector<Atom>& edb,
                            const GroundConfig& cfg, const Domain* domainOverride) {
  GroundProgram g;
  g.domain = domainOverride ? *domainOverride : herbrandDomain(p, edb);

  Program work = p;
  for (const auto& a : edb) {
    Rule fact;
    fact.head = Head::ofAtom(a);
    work.rules.push_back(std::move(fact));
  }

  g.source = work;
  size_t instances = 0;
  for (const auto& rule : work.rules) {
    auto lazy = deferredBindings(rule);
    std::set<std::string> deferred;
    for (const auto& lb : lazy) deferred.insert(lb.var);

    auto sorts = variableSorts(rule);
    std::vector<std::string> enumVars;
    std::vector<std::vector<Term>> enumRanges;
    bool vacuous = false;
    for (const auto& x : rule.globals) {
      if (deferred.count(x)) continue;
      enumVars.push_back(x);
      auto it = sorts.find(x);
      enumRanges.push_back(g.domain.rangeFor(
          it == sorts.end() ? std::vector<const Semiring*>{} : it->second));
      if (enumRanges.back().empty()) {
        g.warnings.push_back("rule '" + printRule(rule) +
                             "' dropped: variable " + x + " has an empty range");
        vacuous = true;
      }
    }
    if (vacuous) continue;

    std::vector<size_t> idx(enumVars.size(), 0);
    for (;;) {
      if (++instances > cfg.instanceBudget)
        throw BudgetError("grounding exceeded the instance budget (" +
                          std::to_string(cfg.instanceBudget) + ")");
      Subst s;
      for (size_t k = 0; k < enumVars.size(); ++k) s[enumVars[k]] = enumRanges[k][idx[k]];
      GroundRule gr;
      gr.ast = substitute(rule, s);
      gr.closed = sigmaClosure(gr.ast);
      gr.lazy = lazy;
      for (const auto& v : gr.ast.locals) {
        auto it = sorts.find(v);
        gr.localSorts[v] =
            it == sorts.end() ? std::vector<const Semiring*>{} : it->second;
      }
      internAtoms(gr.ast, g.domain, g.base);
      g.rules.push_back(std::move(gr));

      size_t k = 0;
      while (k < idx.size() && ++idx[k] == enumRanges[k].size()) idx[k++] = 0;
      if (k == idx.size() || idx.empty()) break;
    }
  }
  return g;
}

RangeEnv GroundProgram::staticEnv(const GroundRule& r) const {
  RangeEnv env;
  for (const auto& [var, sort] : r.localSorts)
    env.set(var, VarRange{r.infiniteVars.count(var) > 0, domain.rangeFor(sort)});
  return env;
}

RangeEnv buildRanges(const std::map<std::string, std::vector<const Semiring*>>& sorts,
                     const Domain& dom, const AtomTable& table, const AtomBits& there,
                     const std::set<std::string>& infiniteVars) {
  // Support can only live among the program's own constants and the terms
  // occurring in the candidate's atoms.
  std::set<Value> extraVals;
  std::set<std::string> extraSyms;
  for (size_t id = 0; id < there.size(); ++id) {
    if (!there[id]) continue;
    for (const auto& t : table.atom(static_cast<int>(id)).args) {
      if (t.isValue()) extraVals.insert(t.val());
      if (t.isConstant()) extraSyms.insert(t.name());
    }
  }
  RangeEnv env;
  for (const auto& [var, sort] : sorts) {
    std::vector<Term> range = dom.rangeFor(sort);
    std::set<Term> seen(range.begin(), range.end());
    if (sort.empty()) {
      for (const auto& s : extraSyms) {
        Term t = Term::constant(s);
        if (seen.insert(t).second) range.push_back(t);
      }
      for (const auto& v : extraVals) {
        Term t = Term::value(v);
        if (seen.insert(t).second) range.push_back(t);
      }
    } else {
      for (const auto& v : extraVals) {
        std::optional<Value> cur = sort[0]->coerce(v);
        for (size_t i = 1; cur && i < sort.size(); ++i)
          if (!sort[i]->coerce(*cur)) cur = std::nullopt;
        if (!cur) continue;
        Term t = Term::value(*cur);
        if (seen.insert(t).second) range.push_back(t);
      }
    }
    env.set(var, VarRange{infiniteVars.count(var) > 0, std::move(range)});
  }
  return env;
}

RangeEnv GroundProgram::envFor(const GroundRule& r, const AtomTable& table,
                               const AtomBits& there) const {
  return buildRanges(r.localSorts, domain, table, there, r.infiniteVars);
}

std::vector<Rule> resolveLazy(const GroundRule& gr, Evaluator& ev) {
  std::vector<Subst> substs{Subst{}};
  for (const auto& lb : gr.lazy) {
    const auto& cons = *gr.closed.body[lb.bodyIndex].cons;
    std::vector<Value> vals;
    for (World w : {World::T, World::H}) {
      EvalResult v = ev.evalWeighted(cons.body, *cons.ring, w);
      if (!v) continue;
      if (std::find(vals.begin(), vals.end(), *v) == vals.end()) vals.push_back(*v);
    }
    std::vector<Subst> next;
    for (const auto& s : substs)
      for (const auto& v : vals) {
        Subst n = s;
        n[lb.var] = Term::value(v);
        next.push_back(std::move(n));
      }
    substs = std::move(next);
  }
  std::vector<Rule> out;
  for (const auto& s : substs) out.push_back(substitute(gr.closed, s));
  return out;
}

Rule resolveLazyAtT(const GroundRule& gr, Evaluator& ev, bool& defined) {
  Subst s;
  defined = true;
  for (const auto& lb : gr.lazy) {
    const auto& cons = *gr.closed.body[lb.bodyIndex].cons;
    EvalResult v = ev.evalWeighted(cons.body, *cons.ring, World::T);
    if (!v) {
      defined = false;
      return Rule{};
    }
    s[lb.var] = Term::value(*v);
  }
  return substitute(gr.closed, s);
}

std::string dumpGround(const GroundProgram& g) {
  std::ostringstream out;
  for (const auto& r : g.rules) out << printRule(r.ast) << '\n';
  return out.str();
}

}  // namespace acsolve

#ifndef ACSOLVE_TESTS_NAIVE_ORACLE_HPP
#define ACSOLVE_TESTS_NAIVE_ORACLE_HPP

#include <algorithm>
#include <vector>

#include "acsolve/evaluator.hpp"
#include "acsolve/grounder.hpp"

namespace acsolve::testing {

// A maximally naive re-derivation of the equilibrium definitions: enumerate
// every subset of the given universe, substitute every deferred binding by
// brute force over candidate values, and re-check satisfaction from scratch.
// No memoisation, no lazy shortcuts, no forced-atom pruning.
struct NaiveOracle {
  const GroundProgram& g;
  std::vector<Atom> universe;
  AtomTable table;

  // The universe is an input: the base plus any value atoms the test knows
  // to be derivable (the oracle itself takes no lazy shortcuts).
  explicit NaiveOracle(const GroundProgram& gp, std::vector<Atom> extra = {})
      : g(gp) {
    for (size_t i = 0; i < g.base.size(); ++i) {
      universe.push_back(g.base.atom(static_cast<int>(i)));
      table.intern(g.base.atom(static_cast<int>(i)));
    }
    for (const auto& a : extra) {
      if (table.find(a) < 0) {
        universe.push_back(a);
        table.intern(a);
      }
    }
    std::sort(universe.begin(), universe.end());
  }

  // candidate binding values: every ring value in the domain and in the
  // interpretation, plus the two pointwise evaluations
  bool ruleSatisfied(const GroundRule& r, const HTInterpretation& ht,
                     const RangeEnv& env, World w) {
    if (r.lazy.empty()) {
      Evaluator ev(table, ht, &env);
      return satRule(ev, r.closed, w) == Sat3::True;
    }
    // universally quantify the deferred variables over all plausible values
    std::vector<Value> cands;
    {
      Evaluator ev(table, ht, &env);
      for (const auto& lb : r.lazy) {
        const auto& cons = *r.closed.body[lb.bodyIndex].cons;
        for (World wp : {World::H, World::T}) {
          auto v = ev.evalWeighted(cons.body, *cons.ring, wp);
          if (v) cands.push_back(*v);
        }
      }
    }
    for (const auto& v : g.domain.values) cands.push_back(v);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    std::vector<const LazyBinding*> lbs;
    for (const auto& lb : r.lazy) lbs.push_back(&lb);
    std::vector<size_t> idx(lbs.size(), 0);
    if (cands.empty()) return true;
    for (;;) {
      Subst s;
      for (size_t i = 0; i < lbs.size(); ++i) s[lbs[i]->var] = Term::value(cands[idx[i]]);
      Rule inst = substitute(r.closed, s);
      Evaluator ev(table, ht, &env);
      if (satRule(ev, inst, w) != Sat3::True) return false;
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == cands.size()) idx[k++] = 0;
      if (k == idx.size()) return true;
    }
  }

  bool htModel(const HTInterpretation& ht, World w) {
    for (const auto& r : g.rules) {
      RangeEnv env = g.envFor(r, table, ht.there());
      if (!ruleSatisfied(r, ht, env, w)) return false;
    }
    return true;
  }

  std::vector<std::vector<Atom>> equilibria() {
    size_t n = universe.size();
    std::vector<std::vector<Atom>> out;
    for (uint64_t m = 0; m < (uint64_t{1} << n); ++m) {
      AtomBits M(table.size(), false);
      for (size_t i = 0; i < n; ++i)
        if (m & (uint64_t{1} << i)) M[table.find(universe[i])] = true;
      HTInterpretation total = HTInterpretation::total(M);
      if (!htModel(total, World::H)) continue;
      bool minimal = true;
      for (uint64_t h = (m - 1) & m;; h = (h - 1) & m) {
        if (h != m) {
          AtomBits H(table.size(), false);
          for (size_t i = 0; i < n; ++i)
            if (h & (uint64_t{1} << i)) H[table.find(universe[i])] = true;
          HTInterpretation ht(H, M);
          if (htModel(ht, World::H)) {
            minimal = false;
            break;
          }
        }
        if (h == 0) break;
      }
      if (!minimal) continue;
      std::vector<Atom> model;
      for (size_t i = 0; i < n; ++i)
        if (m & (uint64_t{1} << i)) model.push_back(universe[i]);
      std::sort(model.begin(), model.end());
      out.push_back(std::move(model));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    return out;
  }
};

}  // namespace acsolve::testing

#endif

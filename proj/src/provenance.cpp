#include "acsolve/provenance.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "acsolve/desugar.hpp"
#include "acsolve/grounder.hpp"
#include "acsolve/parser.hpp"

namespace acsolve {

namespace {
const char* kPadPred = "prov_e";
const char* kLeafBound = "leafbound";
}  // namespace

DatalogProgram parseDatalog(const std::string& text) {
  Program p = parseProgram(text);
  DatalogProgram d;
  std::set<std::string> headPreds;
  for (const auto& r : p.rules) {
    if (r.head.kind != Head::Kind::Atom)
      throw ParseError(1, 1, "datalog rules need plain atom heads");
    DRule dr;
    dr.head = *r.head.atom;
    for (const auto& lit : r.body) {
      if (!lit.isAtom() || lit.negated)
        throw ParseError(1, 1, "datalog bodies are conjunctions of positive atoms");
      dr.body.push_back(*lit.atom);
    }
    headPreds.insert(dr.head.pred);
    d.rules.push_back(std::move(dr));
  }
  std::set<std::string> all;
  for (const auto& r : d.rules) {
    all.insert(r.head.pred);
    for (const auto& a : r.body) all.insert(a.pred);
  }
  for (const auto& q : all)
    if (!headPreds.count(q)) d.edbPredicates.insert(q);
  return d;
}

EdbLabels parseEdbLabels(const std::string& text, const Semiring& ring) {
  EdbLabels out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto cut = line.find('%');
    if (cut != std::string::npos) line = line.substr(0, cut);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.rfind('=');
    if (eq == std::string::npos)
      throw ParseError(lineno, 1, "edb lines have the form 'atom = value'");
    std::string atomText = line.substr(0, eq);
    std::string valText = line.substr(eq + 1);
    auto atoms = parseFacts(atomText + ".");
    if (atoms.size() != 1) throw ParseError(lineno, 1, "one atom per edb line");
    out.emplace_back(atoms[0], ring.parseValue(valText));
  }
  return out;
}

namespace {

struct GroundDatalog {
  std::vector<DRule> rules;  // ground, padded to >= 2 body atoms
  std::set<Atom> atoms;
  Atom pad;
};

// Naive substitution over the constants occurring in the program and edb.
GroundDatalog groundDatalog(const DatalogProgram& d, const EdbLabels& edb) {
  GroundDatalog g;
  g.pad = Atom{kPadPred, {}};
  std::set<Term> consts;
  auto scan = [&consts](const Atom& a) {
    for (const auto& t : a.args)
      if (!t.isVar()) consts.insert(t);
  };
  for (const auto& r : d.rules) {
    scan(r.head);
    for (const auto& b : r.body) scan(b);
  }
  for (const auto& [a, v] : edb) scan(a);
  std::vector<Term> universe(consts.begin(), consts.end());

  for (const auto& r : d.rules) {
    std::set<std::string> vars;
    collectVars(r.head, vars);
    for (const auto& b : r.body) collectVars(b, vars);
    std::vector<std::string> vs(vars.begin(), vars.end());
    if (!vs.empty() && universe.empty()) continue;
    std::vector<size_t> idx(vs.size(), 0);
    for (;;) {
      Subst s;
      for (size_t i = 0; i < vs.size(); ++i) s[vs[i]] = universe[idx[i]];
      DRule gr;
      gr.head = substitute(r.head, s);
      for (const auto& b : r.body) gr.body.push_back(substitute(b, s));
      while (gr.body.size() < 2) gr.body.push_back(g.pad);
      g.atoms.insert(gr.head);
      for (const auto& b : gr.body) g.atoms.insert(b);
      g.rules.push_back(std::move(gr));
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == universe.size()) idx[k++] = 0;
      if (k == idx.size() || idx.empty()) break;
    }
  }
  return g;
}

// Compositions l1 + ... + ln = total with li >= 1.
void compositions(long total, size_t n, std::vector<long>& cur,
                  const std::function<void(const std::vector<long>&)>& emit) {
  if (n == 1) {
    if (total >= 1) {
      cur.push_back(total);
      emit(cur);
      cur.pop_back();
    }
    return;
  }
  for (long l = 1; l + static_cast<long>(n) - 1 <= total; ++l) {
    cur.push_back(l);
    compositions(total - l, n - 1, cur, emit);
    cur.pop_back();
  }
}

// Atoms with infinitely many nonzero-labelled derivations over nat-inf:
// exactly those reaching a cycle through rules whose bodies are all
// nonzero-derivable.
std::set<Atom> infiniteAtomsOf(const GroundDatalog& g,
                               const std::map<Atom, Value>& edbMap,
                               const Semiring& ring) {
  std::set<Atom> nd;
  for (const auto& [a, v] : edbMap)
    if (ring.compare(v, ring.zero()) != 0) nd.insert(a);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules) {
      if (nd.count(r.head)) continue;
      bool all = true;
      for (const auto& b : r.body)
        if (!nd.count(b)) all = false;
      if (all) {
        nd.insert(r.head);
        changed = true;
      }
    }
  }
  // usable dependency edges head -> body
  std::map<Atom, std::set<Atom>> edges;
  for (const auto& r : g.rules) {
    bool all = nd.count(r.head) > 0;
    for (const auto& b : r.body)
      if (!nd.count(b)) all = false;
    if (!all) continue;
    for (const auto& b : r.body)
      if (!b.ground() || b.pred != kPadPred) edges[r.head].insert(b);
  }
  // atoms on usable cycles
  std::set<Atom> onCycle;
  for (const auto& [start, _] : edges) {
    // DFS from each successor of start, looking for start
    std::set<Atom> seen;
    std::vector<Atom> stack(edges[start].begin(), edges[start].end());
    bool found = false;
    while (!stack.empty() && !found) {
      Atom cur = stack.back();
      stack.pop_back();
      if (cur == start) {
        found = true;
        break;
      }
      if (!seen.insert(cur).second) continue;
      auto it = edges.find(cur);
      if (it != edges.end())
        for (const auto& nxt : it->second) stack.push_back(nxt);
    }
    if (found) onCycle.insert(start);
  }
  // everything reaching a cycle atom
  std::set<Atom> infinite;
  for (const auto& a : nd) {
    std::set<Atom> seen;
    std::vector<Atom> stack{a};
    while (!stack.empty()) {
      Atom cur = stack.back();
      stack.pop_back();
      if (onCycle.count(cur)) {
        infinite.insert(a);
        break;
      }
      if (!seen.insert(cur).second) continue;
      auto it = edges.find(cur);
      if (it != edges.end())
        for (const auto& nxt : it->second) stack.push_back(nxt);
    }
  }
  return infinite;
}

}  // namespace

ProvenanceTable computeProvenance(const DatalogProgram& d, const EdbLabels& edb,
                                  const Semiring& ring, long lmax) {
  if (lmax < 1) throw EvalError("the leaf bound must be at least 1");
  std::set<std::string> headPreds;
  for (const auto& r : d.rules) headPreds.insert(r.head.pred);
  GroundDatalog g = groundDatalog(d, edb);
  std::map<Atom, Value> edbMap;
  for (const auto& [a, v] : edb) {
    if (headPreds.count(a.pred))
      throw TypeError("extensional predicate '" + a.pred +
                      "' must not occur in rule heads");
    auto cv = ring.coerce(v);
    if (!cv)
      throw TypeError("edb label " + v.str() + " is outside '" + ring.name() + "'");
    edbMap.emplace(a, *cv);
  }
  edbMap.emplace(g.pad, ring.one());

  ProvenanceTable table;
  table.leafBound = lmax;

  // W[l][atom]: sum over trees with exactly l leaves
  std::vector<std::map<Atom, Value>> W(static_cast<size_t>(lmax) + 1);
  for (const auto& [a, v] : edbMap) W[1][a] = v;

  std::map<Atom, Value> cumulative;
  for (const auto& [a, v] : W[1]) cumulative[a] = v;

  std::set<Atom> allAtoms = g.atoms;
  for (const auto& [a, v] : edbMap) allAtoms.insert(a);
  const long window = static_cast<long>(allAtoms.size());
  long stableRun = 0;

  std::set<Atom> infinite;
  if (ring.name() == "nat-inf") infinite = infiniteAtomsOf(g, edbMap, ring);

  for (long l = 2; l <= lmax; ++l) {
    auto& row = W[static_cast<size_t>(l)];
    for (const auto& r : g.rules) {
      std::vector<long> cur;
      compositions(l, r.body.size(), cur, [&](const std::vector<long>& split) {
        Value prod = ring.one();
        for (size_t i = 0; i < r.body.size(); ++i) {
          auto it = W[static_cast<size_t>(split[i])].find(r.body[i]);
          if (it == W[static_cast<size_t>(split[i])].end()) return;
          prod = ring.mul(prod, it->second);
        }
        auto [it, fresh] = row.emplace(r.head, prod);
        if (!fresh) it->second = ring.add(it->second, prod);
      });
    }
    bool changed = false;
    for (const auto& [a, v] : row) {
      if (infinite.count(a)) continue;  // resolved exactly below
      auto [it, fresh] = cumulative.emplace(a, v);
      if (!fresh) {
        Value next = ring.add(it->second, v);
        if (ring.compare(next, it->second) != 0) {
          it->second = next;
          changed = true;
        }
      } else {
        changed = true;
      }
    }
    stableRun = changed ? 0 : stableRun + 1;
  }
  // stable over the final window of leaf counts, with the infinite part
  // resolved exactly
  bool converged = stableRun >= window;

  auto isEdb = [&](const Atom& a) {
    return a.pred == kPadPred || !headPreds.count(a.pred);
  };
  for (size_t li = 1; li < W.size(); ++li)
    for (const auto& [a, v] : W[li])
      if (!isEdb(a)) table.perLeaf[{a, static_cast<long>(li)}] = v;

  for (auto& [a, v] : cumulative) {
    if (isEdb(a)) continue;
    table.entries[a] = v;
  }
  for (const auto& a : infinite) {
    if (isEdb(a)) continue;
    table.entries[a] = Value::posInf();
    table.infiniteAtoms.insert(a);
  }
  table.converged = converged;
  return table;
}

namespace {

struct DTree {
  Atom root;
  int ruleIdx = -1;  // -1: leaf
  std::vector<DTree> kids;

  long leaves() const {
    if (ruleIdx < 0) return 1;
    long n = 0;
    for (const auto& k : kids) n += k.leaves();
    return n;
  }
  Value label(const std::map<Atom, Value>& edbMap, const Semiring& ring) const {
    if (ruleIdx < 0) return edbMap.at(root);
    Value v = ring.one();
    for (const auto& k : kids) v = ring.mul(v, k.label(edbMap, ring));
    return v;
  }
};

}  // namespace

ProvenanceTable provenanceTreeOracle(const DatalogProgram& d, const EdbLabels& edb,
                                     const Semiring& ring, long lmax,
                                     size_t treeBudget) {
  GroundDatalog g = groundDatalog(d, edb);
  std::map<Atom, Value> edbMap;
  for (const auto& [a, v] : edb) edbMap.emplace(a, *ring.coerce(v));
  edbMap.emplace(g.pad, ring.one());

  size_t produced = 0;
  // all derivation trees for `a` with exactly l leaves
  std::map<std::pair<Atom, long>, std::vector<DTree>> memo;
  std::function<const std::vector<DTree>&(const Atom&, long)> trees =
      [&](const Atom& a, long l) -> const std::vector<DTree>& {
    auto key = std::make_pair(a, l);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    auto& out = memo[key];
    if (l == 1 && edbMap.count(a)) out.push_back(DTree{a, -1, {}});
    for (size_t ri = 0; ri < g.rules.size(); ++ri) {
      const DRule& r = g.rules[ri];
      if (!(r.head == a)) continue;
      std::vector<long> cur;
      compositions(l, r.body.size(), cur, [&](const std::vector<long>& split) {
        std::vector<std::vector<DTree>> choices;
        for (size_t i = 0; i < r.body.size(); ++i) {
          choices.push_back(trees(r.body[i], split[i]));
          if (choices.back().empty()) return;
        }
        std::vector<size_t> idx(choices.size(), 0);
        for (;;) {
          DTree t{a, static_cast<int>(ri), {}};
          for (size_t i = 0; i < choices.size(); ++i) t.kids.push_back(choices[i][idx[i]]);
          out.push_back(std::move(t));
          if (++produced > treeBudget)
            throw BudgetError("tree enumeration budget exceeded");
          size_t k = 0;
          while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
          if (k == idx.size()) break;
        }
      });
    }
    return out;
  };

  std::set<std::string> headPreds;
  for (const auto& r : d.rules) headPreds.insert(r.head.pred);
  ProvenanceTable table;
  table.leafBound = lmax;
  table.converged = true;
  for (const auto& a : g.atoms) {
    if (a.pred == kPadPred || !headPreds.count(a.pred)) continue;
    bool any = false;
    Value total = ring.zero();
    for (long l = 1; l <= lmax; ++l) {
      const auto& ts = trees(a, l);
      if (ts.empty()) continue;
      Value sum = ring.zero();
      for (const auto& t : ts) sum = ring.add(sum, t.label(edbMap, ring));
      table.perLeaf[{a, l}] = sum;
      total = any ? ring.add(total, sum) : sum;
      any = true;
    }
    if (any) table.entries[a] = total;
  }
  return table;
}

namespace {

std::string mangled(const std::string& prefix, const std::string& pred) {
  return prefix + pred;
}

void checkReservedPreds(const DatalogProgram& d) {
  auto bad = [](const std::string& p) {
    for (const char* pre : {"pz_", "dz_", "pi_", "di_", "pl_", "dl_", "p_"})
      if (p.rfind(pre, 0) == 0) return true;
    return p == kPadPred || p == kLeafBound;
  };
  for (const auto& r : d.rules) {
    if (bad(r.head.pred)) throw TypeError("predicate name '" + r.head.pred + "' is reserved");
    for (const auto& b : r.body)
      if (bad(b.pred)) throw TypeError("predicate name '" + b.pred + "' is reserved");
  }
}

ConstraintPtr binding(const std::string& var, const std::string& ringSpec,
                      WeightedPtr body) {
  auto c = std::make_shared<AlgebraicConstraint>();
  c->lhs = Term::var(var);
  c->cmp = CmpOp::Eq;
  c->ringSpec = ringSpec;
  c->ring = lookupSemiring(ringSpec);
  c->body = std::move(body);
  return c;
}

}  // namespace

Program translateProvenance(const DatalogProgram& d, const std::string& ringSpec,
                            const EdbLabels& edb, std::optional<long> truncateLeaves) {
  const Semiring* ring = lookupSemiring(ringSpec);
  if (!ring) throw TypeError("unknown semiring '" + ringSpec + "'");
  checkReservedPreds(d);

  // padded copy; all rules have >= 2 body atoms so leaf counts decrease
  std::vector<DRule> rules = d.rules;
  Atom pad{kPadPred, {}};
  for (auto& r : rules)
    while (r.body.size() < 2) r.body.push_back(pad);

  std::set<std::string> idb;
  std::map<std::string, std::vector<Term>> headVarsOf;  // representative head args
  for (const auto& r : rules) idb.insert(r.head.pred);

  Program out;
  FreshVars fresh;

  auto freshVars = [&fresh](size_t n) {
    std::vector<std::string> vs;
    for (size_t i = 0; i < n; ++i) vs.push_back(fresh.next());
    return vs;
  };

  // per rule: the indexed relations
  for (size_t ri = 0; ri < rules.size(); ++ri) {
    const DRule& r = rules[ri];
    std::string idxName = std::to_string(ri + 1);
    std::set<std::string> headVars, bodyVars;
    collectVars(r.head, headVars);
    for (const auto& b : r.body) collectVars(b, bodyVars);
    std::vector<std::string> zbar;
    for (const auto& v : bodyVars)
      if (!headVars.count(v)) zbar.push_back(v);

    size_t n = r.body.size();
    auto vv = freshVars(n);  // value of each subderivation
    auto ll = freshVars(n);  // leaf count of each subderivation
    std::string V = fresh.next(), L = fresh.next();

    std::vector<Literal> bodyLits;
    for (size_t i = 0; i < n; ++i) {
      Atom pl;
      pl.pred = mangled("pl_", r.body[i].pred);
      pl.args = r.body[i].args;
      pl.args.push_back(Term::var(vv[i]));
      pl.args.push_back(Term::var(ll[i]));
      Literal lit;
      lit.atom = std::move(pl);
      bodyLits.push_back(std::move(lit));
    }
    WeightedPtr lsum = Weighted::var(ll[0]);
    for (size_t i = 1; i < n; ++i) lsum = Weighted::plus(lsum, Weighted::var(ll[i]));
    WeightedPtr vprod = Weighted::var(vv[0]);
    for (size_t i = 1; i < n; ++i) vprod = Weighted::times(vprod, Weighted::var(vv[i]));

    Literal lBind;
    lBind.cons = binding(L, "nat", lsum);
    Literal vBind;
    vBind.cons = binding(V, ringSpec, vprod);
    std::optional<Literal> guard;
    if (truncateLeaves) {
      Literal g;
      g.atom = Atom{kLeafBound, {Term::var(L)}};
      guard = std::move(g);
    }

    auto zTerms = [&zbar] {
      std::vector<Term> ts;
      for (const auto& z : zbar) ts.push_back(Term::var(z));
      return ts;
    };

    // pz_q_<i>(Ybar, V, L, Zbar) <- pl_..., L = sum, V = prod
    {
      Rule rule;
      Atom h;
      h.pred = mangled("pz_", r.head.pred) + "_" + idxName;
      h.args = r.head.args;
      h.args.push_back(Term::var(V));
      h.args.push_back(Term::var(L));
      for (auto& t : zTerms()) h.args.push_back(t);
      rule.head = Head::ofAtom(std::move(h));
      rule.body = bodyLits;
      rule.body.push_back(lBind);
      rule.body.push_back(vBind);
      if (guard) rule.body.push_back(*guard);
      out.rules.push_back(std::move(rule));
    }
    // dz_q_<i>(Ybar, L, Zbar) <- pl_..., L = sum
    {
      Rule rule;
      Atom h;
      h.pred = mangled("dz_", r.head.pred) + "_" + idxName;
      h.args = r.head.args;
      h.args.push_back(Term::var(L));
      for (auto& t : zTerms()) h.args.push_back(t);
      rule.head = Head::ofAtom(std::move(h));
      rule.body = bodyLits;
      rule.body.push_back(lBind);
      if (guard) rule.body.push_back(*guard);
      out.rules.push_back(std::move(rule));
    }
    // pi_q(Ybar, V2, L2, i) <- dz_q_<i>(Ybar, L2, Zbar),
    //                          V2 = sum over (Vs, Zbar*) of pz * Vs
    {
      auto yb = freshVars(r.head.args.size());
      std::vector<Term> ybar;
      for (auto& v : yb) ybar.push_back(Term::var(v));
      std::string V2 = fresh.next(), L2 = fresh.next();
      auto zb = freshVars(zbar.size());
      auto zs = freshVars(zbar.size());

      Rule rule;
      Atom h;
      h.pred = mangled("pi_", r.head.pred);
      h.args = ybar;
      h.args.push_back(Term::var(V2));
      h.args.push_back(Term::var(L2));
      h.args.push_back(Term::value(Value::ofInt(static_cast<long>(ri + 1))));
      rule.head = Head::ofAtom(std::move(h));

      Atom dz;
      dz.pred = mangled("dz_", r.head.pred) + "_" + idxName;
      dz.args = ybar;
      dz.args.push_back(Term::var(L2));
      for (auto& v : zb) dz.args.push_back(Term::var(v));
      Literal dzLit;
      dzLit.atom = std::move(dz);
      rule.body.push_back(std::move(dzLit));

      std::string Vs = fresh.next();
      Atom pz;
      pz.pred = mangled("pz_", r.head.pred) + "_" + idxName;
      pz.args = ybar;
      pz.args.push_back(Term::var(Vs));
      pz.args.push_back(Term::var(L2));
      for (auto& v : zs) pz.args.push_back(Term::var(v));
      Literal vb;
      vb.cons = binding(V2, ringSpec,
                        Weighted::times(Weighted::embed(Formula::atomic(pz)),
                                        Weighted::var(Vs)));
      rule.body.push_back(std::move(vb));
      out.rules.push_back(std::move(rule));
    }
    // di_q(Ybar, L2, i) <- dz_q_<i>(Ybar, L2, Zbar)
    {
      auto yb = freshVars(r.head.args.size());
      std::vector<Term> ybar;
      for (auto& v : yb) ybar.push_back(Term::var(v));
      std::string L2 = fresh.next();
      auto zb = freshVars(zbar.size());

      Rule rule;
      Atom h;
      h.pred = mangled("di_", r.head.pred);
      h.args = ybar;
      h.args.push_back(Term::var(L2));
      h.args.push_back(Term::value(Value::ofInt(static_cast<long>(ri + 1))));
      rule.head = Head::ofAtom(std::move(h));
      Atom dz;
      dz.pred = mangled("dz_", r.head.pred) + "_" + idxName;
      dz.args = ybar;
      dz.args.push_back(Term::var(L2));
      for (auto& v : zb) dz.args.push_back(Term::var(v));
      Literal dzLit;
      dzLit.atom = std::move(dz);
      rule.body.push_back(std::move(dzLit));
      out.rules.push_back(std::move(rule));
    }
    headVarsOf.emplace(r.head.pred, r.head.args);
  }

  // per idb predicate: aggregate over rules, then over leaf counts
  for (const auto& q : idb) {
    size_t arity = headVarsOf[q].size();
    // pl_q(Ybar, V, L) <- di_q(Ybar, L, I), V = sum over (Vs, Is) pi_q * Vs
    {
      auto yb = freshVars(arity);
      std::vector<Term> ybar;
      for (auto& v : yb) ybar.push_back(Term::var(v));
      std::string V = fresh.next(), L = fresh.next(), I = fresh.next();
      std::string Vs = fresh.next(), Is = fresh.next();

      Rule rule;
      Atom h;
      h.pred = mangled("pl_", q);
      h.args = ybar;
      h.args.push_back(Term::var(V));
      h.args.push_back(Term::var(L));
      rule.head = Head::ofAtom(std::move(h));

      Atom di;
      di.pred = mangled("di_", q);
      di.args = ybar;
      di.args.push_back(Term::var(L));
      di.args.push_back(Term::var(I));
      Literal diLit;
      diLit.atom = std::move(di);
      rule.body.push_back(std::move(diLit));

      Atom pi;
      pi.pred = mangled("pi_", q);
      pi.args = ybar;
      pi.args.push_back(Term::var(Vs));
      pi.args.push_back(Term::var(L));
      pi.args.push_back(Term::var(Is));
      Literal vb;
      vb.cons = binding(V, ringSpec,
                        Weighted::times(Weighted::embed(Formula::atomic(pi)),
                                        Weighted::var(Vs)));
      rule.body.push_back(std::move(vb));
      out.rules.push_back(std::move(rule));
    }
    // dl_q(Ybar, L) <- di_q(Ybar, L, I)
    {
      auto yb = freshVars(arity);
      std::vector<Term> ybar;
      for (auto& v : yb) ybar.push_back(Term::var(v));
      std::string L = fresh.next(), I = fresh.next();
      Rule rule;
      Atom h;
      h.pred = mangled("dl_", q);
      h.args = ybar;
      h.args.push_back(Term::var(L));
      rule.head = Head::ofAtom(std::move(h));
      Atom di;
      di.pred = mangled("di_", q);
      di.args = ybar;
      di.args.push_back(Term::var(L));
      di.args.push_back(Term::var(I));
      Literal diLit;
      diLit.atom = std::move(di);
      rule.body.push_back(std::move(diLit));
      out.rules.push_back(std::move(rule));
    }
    // p_q(Ybar, V) <- dl_q(Ybar, L), V = sum over (Vs, Ls) pl_q * Vs
    {
      auto yb = freshVars(arity);
      std::vector<Term> ybar;
      for (auto& v : yb) ybar.push_back(Term::var(v));
      std::string V = fresh.next(), L = fresh.next();
      std::string Vs = fresh.next(), Ls = fresh.next();
      Rule rule;
      Atom h;
      h.pred = mangled("p_", q);
      h.args = ybar;
      h.args.push_back(Term::var(V));
      rule.head = Head::ofAtom(std::move(h));
      Atom dl;
      dl.pred = mangled("dl_", q);
      dl.args = ybar;
      dl.args.push_back(Term::var(L));
      Literal dlLit;
      dlLit.atom = std::move(dl);
      rule.body.push_back(std::move(dlLit));
      Atom pl;
      pl.pred = mangled("pl_", q);
      pl.args = ybar;
      pl.args.push_back(Term::var(Vs));
      pl.args.push_back(Term::var(Ls));
      Literal vb;
      vb.cons = binding(V, ringSpec,
                        Weighted::times(Weighted::embed(Formula::atomic(pl)),
                                        Weighted::var(Vs)));
      rule.body.push_back(std::move(vb));
      out.rules.push_back(std::move(rule));
    }
  }

  // edb labels and the unit pad atom enter as per-leaf facts
  auto addFact = [&out](Atom a) {
    Rule f;
    f.head = Head::ofAtom(std::move(a));
    out.rules.push_back(std::move(f));
  };
  {
    Atom padFact;
    padFact.pred = mangled("pl_", kPadPred);
    padFact.args = {Term::value(ring->one()), Term::value(Value::ofInt(1))};
    addFact(std::move(padFact));
  }
  for (const auto& [a, v] : edb) {
    Atom f;
    f.pred = mangled("pl_", a.pred);
    f.args = a.args;
    auto cv = ring->coerce(v);
    if (!cv) throw TypeError("edb label outside the carrier");
    f.args.push_back(Term::value(*cv));
    f.args.push_back(Term::value(Value::ofInt(1)));
    addFact(std::move(f));
  }
  if (truncateLeaves) {
    for (long l = 1; l <= *truncateLeaves; ++l)
      addFact(Atom{kLeafBound, {Term::value(Value::ofInt(l))}});
  }

  classifyVariables(out);
  return out;
}

std::string ProvenanceTable::toText(bool machine) const {
  std::ostringstream out;
  for (const auto& [a, v] : entries) {
    const char* mark = infiniteAtoms.count(a) ? "infinite"
                       : converged           ? "converged"
                                             : "partial";
    out << a.str() << " = " << v.str() << " [" << mark << "]\n";
  }
  (void)machine;
  return out.str();
}

std::string ProvenanceTable::toJson() const {
  nlohmann::json j;
  j["leaf_bound"] = leafBound;
  j["converged"] = converged;
  j["entries"] = nlohmann::json::array();
  for (const auto& [a, v] : entries) {
    nlohmann::json e;
    e["atom"] = a.str();
    e["value"] = v.str();
    e["infinite"] = infiniteAtoms.count(a) > 0;
    j["entries"].push_back(std::move(e));
  }
  return j.dump(2);
}

}  // namespace acsolve

#include <doctest.h>

#include <random>

#include "acsolve/analysis.hpp"
#include "acsolve/desugar.hpp"
#include "acsolve/parser.hpp"
#include "acsolve/printer.hpp"
#include "acsolve/provenance.hpp"
#include "acsolve/solver.hpp"

using namespace acsolve;

namespace {

const char* kBagProgram =
    "b :- e1, e2.\n"
    "b :- e1.\n"
    "c :- e2, b.\n"
    "c :- c, c.\n";

EdbLabels bagEdb(const Semiring& ring, const std::string& v1, const std::string& v2) {
  return {{Atom{"e1", {}}, ring.parseValue(v1)}, {Atom{"e2", {}}, ring.parseValue(v2)}};
}

Atom atom(const std::string& s) { return parseFacts(s + ".")[0]; }

}  // namespace

TEST_CASE("bag semantics example") {
  DatalogProgram d = parseDatalog(kBagProgram);
  CHECK(d.edbPredicates == std::set<std::string>{"e1", "e2"});
  const Semiring& ni = *lookupSemiring("nat-inf");
  auto table = computeProvenance(d, bagEdb(ni, "2", "0"), ni, 10);
  CHECK(table.entries.at(atom("b")) == Value::ofInt(2));
  CHECK(table.entries.at(atom("c")) == Value::ofInt(0));
  CHECK(table.converged);
  CHECK(table.infiniteAtoms.empty());

  // the per-leaf decomposition of b: both derivations use two leaves after
  // padding, contributing 2 (last rule r2) and 0*2 (last rule r1)
  CHECK(table.perLeaf.at({atom("b"), 2}) == Value::ofInt(2));

  // over the boolean semiring provenance degenerates to derivability
  const Semiring& b = *lookupSemiring("bool");
  auto bt = computeProvenance(d, bagEdb(b, "1", "0"), b, 10);
  CHECK(bt.entries.at(atom("b")) == Value::ofInt(1));
  CHECK(bt.entries.at(atom("c")) == Value::ofInt(0));

  // empty edb: nothing derivable
  auto empty = computeProvenance(d, {}, ni, 6);
  CHECK(empty.entries.empty());
}

TEST_CASE("tree oracle matches the spec decompositions") {
  DatalogProgram d = parseDatalog(kBagProgram);
  const Semiring& ni = *lookupSemiring("nat-inf");
  auto t = provenanceTreeOracle(d, bagEdb(ni, "2", "0"), ni, 8);
  CHECK(t.entries.at(atom("b")) == Value::ofInt(2));
  CHECK(t.entries.at(atom("c")) == Value::ofInt(0));
  CHECK(t.perLeaf.at({atom("b"), 2}) == Value::ofInt(2));
  CHECK(t.perLeaf.count({atom("b"), 3}) == 0);
  // c first derives at three leaves (e2 + the two-leaf b trees)
  CHECK(t.perLeaf.at({atom("c"), 3}) == Value::ofInt(0));
}

TEST_CASE("dynamic program agrees with tree enumeration") {
  std::mt19937 rng(2024);
  const Semiring& ni = *lookupSemiring("nat-inf");
  int checked = 0;
  for (int iter = 0; iter < 60; ++iter) {
    // random positive programs over <=4 propositional idb atoms and <=5 rules
    std::vector<std::string> idb{"a", "b", "c", "d"};
    std::vector<std::string> edbp{"e1", "e2", "e3"};
    std::uniform_int_distribution<int> nrules(1, 5), bodyLen(1, 3), pick6(0, 5);
    std::string text;
    for (int r = nrules(rng); r > 0; --r) {
      std::string head = idb[pick6(rng) % idb.size()];
      text += head + " :- ";
      int n = bodyLen(rng);
      for (int i = 0; i < n; ++i) {
        int roll = pick6(rng);
        text += (roll < 3 ? edbp[roll % edbp.size()] : idb[roll % idb.size()]);
        if (i + 1 < n) text += ", ";
      }
      text += ".\n";
    }
    DatalogProgram d = parseDatalog(text);
    EdbLabels edb;
    std::uniform_int_distribution<int> lab(0, 5);
    for (const auto& e : d.edbPredicates)
      edb.push_back({Atom{e, {}}, Value::ofInt(lab(rng))});

    ProvenanceTable fast = computeProvenance(d, edb, ni, 8);
    ProvenanceTable slow;
    try {
      slow = provenanceTreeOracle(d, edb, ni, 8);
    } catch (const BudgetError&) {
      continue;
    }
    ++checked;
    CAPTURE(text);
    CHECK(fast.perLeaf == slow.perLeaf);
    for (const auto& [a, v] : slow.entries) {
      if (fast.infiniteAtoms.count(a)) continue;  // truncated vs exact limit
      CHECK(fast.entries.at(a) == v);
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("leaf counts add up across rule bodies") {
  DatalogProgram d = parseDatalog("a :- b, c.\nb :- e1.\nc :- e2, e3.\n");
  const Semiring& nat = *lookupSemiring("nat");
  EdbLabels edb{{atom("e1"), Value::ofInt(2)},
                {atom("e2"), Value::ofInt(3)},
                {atom("e3"), Value::ofInt(5)}};
  auto t = computeProvenance(d, edb, nat, 10);
  // b: {e1, pad} -> 2 leaves; c: {e2, e3} -> 2 leaves; a: 4 leaves
  CHECK(t.perLeaf.at({atom("b"), 2}) == Value::ofInt(2));
  CHECK(t.perLeaf.at({atom("c"), 2}) == Value::ofInt(15));
  CHECK(t.perLeaf.at({atom("a"), 4}) == Value::ofInt(30));
  CHECK(t.perLeaf.count({atom("a"), 3}) == 0);
  CHECK(t.entries.at(atom("a")) == Value::ofInt(30));
}

TEST_CASE("idempotent semirings converge within the window") {
  // max-tropical: tree labels add, so nonpositive labels keep the maximum at
  // the smallest trees and the table stabilises
  DatalogProgram d = parseDatalog("a :- e1. a :- a, a.\n");
  const Semiring& mt = *lookupSemiring("maxtrop");
  EdbLabels edb{{atom("e1"), Value::ofRat(Rat(-7, 2))}};
  auto t1 = computeProvenance(d, edb, mt, 12);
  auto t2 = computeProvenance(d, edb, mt, 30);
  CHECK(t1.converged);
  CHECK(t1.entries == t2.entries);  // monotone and stable in the bound
  CHECK(t1.entries.at(atom("a")) == Value::ofRat(Rat(-7, 2)));

  // boolean provenance is monotone in the bound
  const Semiring& b = *lookupSemiring("bool");
  DatalogProgram d2 = parseDatalog("a :- e1. a :- a, a. c :- a, e2.\n");
  EdbLabels e2{{atom("e1"), Value::ofInt(1)}, {atom("e2"), Value::ofInt(1)}};
  auto s1 = computeProvenance(d2, e2, b, 4);
  auto s2 = computeProvenance(d2, e2, b, 16);
  for (const auto& [a, v] : s1.entries)
    CHECK(b.compare(v, s2.entries.at(a)) <= 0);
  CHECK(s2.converged);
}

TEST_CASE("productive cycles over nat-inf are flagged infinite") {
  DatalogProgram d = parseDatalog("b :- e1. b :- b, b. c :- b.\n");
  const Semiring& ni = *lookupSemiring("nat-inf");
  EdbLabels edb{{atom("e1"), Value::ofInt(2)}};
  auto t = computeProvenance(d, edb, ni, 10);
  CHECK(t.infiniteAtoms == std::set<Atom>{atom("b"), atom("c")});
  CHECK(t.entries.at(atom("b")) == Value::posInf());
  CHECK(t.entries.at(atom("c")) == Value::posInf());
  CHECK(t.converged);  // everything unresolved is exactly the infinite part

  // an unproductive cycle (zero label) stays finite
  auto z = computeProvenance(d, {{atom("e1"), Value::ofInt(0)}}, ni, 10);
  CHECK(z.infiniteAtoms.empty());
  CHECK(z.entries.at(atom("b")) == Value::ofInt(0));
}

TEST_CASE("translation emits the rule and predicate schemas") {
  DatalogProgram d = parseDatalog(kBagProgram);
  const Semiring& ni = *lookupSemiring("nat-inf");
  EdbLabels edb = bagEdb(ni, "2", "0");
  Program t = translateProvenance(d, "nat-inf", edb);
  // four schemas per rule, three per idb predicate, one pad fact, two edb
  size_t perRule = 4 * d.rules.size();
  size_t perPred = 3 * 2;  // b and c
  CHECK(t.rules.size() == perRule + perPred + 1 + edb.size());
  CHECK(checkSafety(t).allSafe());
  CHECK(checkValueInvention(t));
  CHECK(checkSafety(t).fragment == Fragment::SafeGeneral);

  // printable and reparsable with internal names allowed
  ParseOptions opts;
  opts.allowInternalNames = true;
  Program back = parseProgram(printProgram(t), opts);
  CHECK(back.rules.size() == t.rules.size());
}

TEST_CASE("solving the truncated translation reproduces the table") {
  const Semiring& ni = *lookupSemiring("nat-inf");
  struct Case {
    const char* prog;
    std::vector<std::pair<const char*, const char*>> edb;
  };
  for (const Case& c : {
           Case{"b :- e1, e2.\nb :- e1.\nc :- e2, b.\nc :- c, c.\n",
                {{"e1", "2"}, {"e2", "0"}}},
           Case{"a :- e1, e2.\n", {{"e1", "3"}, {"e2", "5"}}},
           Case{"a :- e1.\nb :- a, e2.\n", {{"e1", "2"}, {"e2", "7"}}},
           // three layers deep: intermediate products leave the static domain
           Case{"a :- e1.\nb :- a, e2.\nc :- b, e3.\n",
                {{"e1", "2"}, {"e2", "7"}, {"e3", "11"}}},
           Case{"x :- e1, e2.\nx :- e2, e3.\ny :- x, x.\n",
                {{"e1", "2"}, {"e2", "3"}, {"e3", "5"}}},
       }) {
    DatalogProgram d = parseDatalog(c.prog);
    EdbLabels edb;
    for (auto& [a, v] : c.edb) edb.push_back({atom(a), ni.parseValue(v)});
    long lmax = 6;
    Program t = translateProvenance(d, "nat-inf", edb, lmax);
    GroundProgram g = groundProgram(t, {});
    SolveConfig cfg;
    cfg.closureRounds = 200;
    auto res = enumerateEquilibrium(g, cfg);
    CAPTURE(c.prog);
    REQUIRE(res.models.size() == 1);
    CHECK(res.definitePath);

    auto table = computeProvenance(d, edb, ni, lmax);
    std::map<Atom, Value> solved;
    for (const auto& a : res.models[0]) {
      if (a.pred.rfind("p_", 0) != 0) continue;
      std::string q = a.pred.substr(2);
      Atom orig{q, std::vector<Term>(a.args.begin(), a.args.end() - 1)};
      solved[orig] = a.args.back().val();
    }
    std::map<Atom, Value> expected;
    for (const auto& [a, v] : table.entries)
      if (!d.edbPredicates.count(a.pred)) expected[a] = v;
    CHECK(solved == expected);
  }
}

TEST_CASE("edb files parse") {
  const Semiring& ni = *lookupSemiring("nat-inf");
  auto edb = parseEdbLabels("e1 = 2\n% comment\nedge(a,b) = 17\n", ni);
  REQUIRE(edb.size() == 2);
  CHECK(edb[0].first == atom("e1"));
  CHECK(edb[0].second == Value::ofInt(2));
  CHECK(edb[1].first == atom("edge(a,b)"));
  CHECK_THROWS_AS(parseEdbLabels("e1 = -3\n", ni), TypeError);
  CHECK_THROWS_AS(parseEdbLabels("no_value_here\n", ni), ParseError);
}

TEST_CASE("negation and reserved names are rejected") {
  CHECK_THROWS_AS(parseDatalog("a :- not b."), ParseError);
  CHECK_THROWS_AS(parseDatalog("a :- 1 =[bool]{ b }."), ParseError);
  DatalogProgram bad = parseDatalog("pl_x :- e1.");
  CHECK_THROWS_AS(translateProvenance(bad, "nat-inf", {}), TypeError);
}

#include <doctest.h>

#include "acsolve/desugar.hpp"
#include "acsolve/grounder.hpp"
#include "acsolve/parser.hpp"
#include "acsolve/printer.hpp"
#include "eval_helpers.hpp"

using namespace acsolve;
using namespace acsolve::testing;

TEST_CASE("herbrand domain collects symbols and values by sort") {
  Program p = parseProgram(
      "s(1). s(2). s(-3).\n"
      "3 <=[int]{ not not s(X) * (s(X) -> in(X)) * X }.\n");
  Domain d = herbrandDomain(p, {});
  auto ints = d.rangeFor({lookupSemiring("int")});
  CHECK(ints == std::vector<Term>{Term::value(Value::ofInt(-3)),
                                  Term::value(Value::ofInt(1)),
                                  Term::value(Value::ofInt(2)),
                                  Term::value(Value::ofInt(3))});
  // nat filters the negatives
  auto nats = d.rangeFor({lookupSemiring("nat")});
  CHECK(nats.size() == 3);

  Domain empty = herbrandDomain(parseProgram("p :- q."), {});
  CHECK(empty.constants.empty());
  CHECK(empty.values.empty());

  Program decl = parseProgram("domain {a, b}. p(a). q(c).");
  Domain dd = herbrandDomain(decl, {});
  CHECK(dd.constants == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("grounding instantiates globals and defers bindings") {
  Program p = parseProgram("glob_sum(Y) :- glob_weight(W), Y =[rat]{ ind(I) * W }.");
  std::vector<Atom> edb =
      parseFacts("glob_weight(2). ind(i1).");
  GroundProgram g = groundProgram(p, edb);
  // one instance for W = 2 plus the two edb facts
  REQUIRE(g.rules.size() == 3);
  const GroundRule* inst = nullptr;
  for (const auto& r : g.rules)
    if (!r.lazy.empty()) inst = &r;
  REQUIRE(inst != nullptr);
  CHECK(inst->lazy.size() == 1);
  CHECK(inst->lazy[0].var == "Y");
  CHECK(printRule(inst->ast) ==
        "glob_sum(Y) :- glob_weight(2), Y =[rat]{ ind(I) * 2 }.");
  // I stays sigma-bound
  CHECK(inst->closed.body[1].cons->body->kind == Weighted::Kind::Sum);

  // variable-free programs ground to themselves
  Program vf = parseProgram("p :- q, not r. 1 =[bool]{ a + b }.");
  GroundProgram gvf = groundProgram(vf, {});
  REQUIRE(gvf.rules.size() == 2);
  CHECK(equal(gvf.rules[0].ast, vf.rules[0]));
  CHECK(equal(gvf.rules[1].ast, vf.rules[1]));

  // empty sort range drops the rule with a warning
  Program er = parseProgram("p(X) :- q(X).");
  GroundProgram ger = groundProgram(er, {});
  CHECK(ger.rules.empty());
  CHECK(!ger.warnings.empty());
}

TEST_CASE("subset-sum grounding keeps the head constraint sigma-bound") {
  Program p = desugarProgram(parseProgram(
      "s(1). s(2). s(3).\n"
      "3 <=[int]{ not not s(X) * (s(X) -> in(X)) * X }.\n"));
  GroundProgram g = groundProgram(p, {});
  const GroundRule* head = nullptr;
  for (const auto& r : g.rules)
    if (r.closed.head.kind == Head::Kind::Constraint) head = &r;
  REQUIRE(head != nullptr);
  CHECK(head->closed.head.cons->body->kind == Weighted::Kind::Sum);
  CHECK(head->localSorts.at("X") ==
        std::vector<const Semiring*>{lookupSemiring("int")});
  // the atom base covers the in-atoms over the int domain
  CHECK(g.base.find(parseFacts("in(1).")[0]) >= 0);
  CHECK(g.base.find(parseFacts("in(3).")[0]) >= 0);
}

TEST_CASE("instance budget") {
  Program p = parseProgram("p(X,Y,Z) :- q(X), q(Y), q(Z).");
  std::vector<Atom> edb = parseFacts("q(1). q(2). q(3). q(4). q(5). q(6). q(7).");
  GroundConfig cfg;
  cfg.instanceBudget = 100;
  CHECK_THROWS_AS(groundProgram(p, edb, cfg), BudgetError);
}

TEST_CASE("lazy resolution pins bindings to the evaluation worlds") {
  Program p = parseProgram("loc_sum(Y) :- Y =[rat]{ ind(I) * loc_weight(I,W) * W }.");
  std::vector<Atom> edb = parseFacts(
      "ind(i1). ind(i2). loc_weight(i1, 2). loc_weight(i2, 3).");
  GroundProgram g = groundProgram(p, edb);
  const GroundRule* lazyRule = nullptr;
  for (const auto& r : g.rules)
    if (!r.lazy.empty()) lazyRule = &r;
  REQUIRE(lazyRule != nullptr);

  // total interpretation: a single instance binding Y to 5
  {
    AtomTable table;
    for (size_t i = 0; i < g.base.size(); ++i) table.intern(g.base.atom(static_cast<int>(i)));
    std::vector<Atom> all;
    for (const auto& a : edb) all.push_back(a);
    AtomBits bits(table.size(), false);
    for (const auto& a : all) bits[table.find(a)] = true;
    HTInterpretation ht = HTInterpretation::total(bits);
    RangeEnv env = g.envFor(*lazyRule, table, bits);
    Evaluator ev(table, ht, &env);
    auto insts = resolveLazy(*lazyRule, ev);
    REQUIRE(insts.size() == 1);
    CHECK(insts[0].head.atom->args[0] == Term::value(Value::ofInt(5)));
  }

  // differing H/T sums give two instances; only the T instance constrains
  {
    AtomTable table;
    for (size_t i = 0; i < g.base.size(); ++i) table.intern(g.base.atom(static_cast<int>(i)));
    AtomBits there(table.size(), false);
    for (const auto& a : edb) there[table.find(a)] = true;
    AtomBits here = there;
    here[table.find(parseFacts("loc_weight(i2, 3).")[0])] = false;
    HTInterpretation ht(here, there);
    RangeEnv env = g.envFor(*lazyRule, table, there);
    Evaluator ev(table, ht, &env);
    auto insts = resolveLazy(*lazyRule, ev);
    REQUIRE(insts.size() == 2);
    std::set<std::string> heads;
    for (const auto& i : insts) heads.insert(i.head.atom->str());
    CHECK(heads == std::set<std::string>{"loc_sum(5)", "loc_sum(2)"});

    // the H-valued instance's body fails at both worlds
    for (const auto& inst : insts) {
      if (inst.head.atom->args[0] == Term::value(Value::ofInt(2))) {
        Evaluator ev2(table, ht, &env);
        CHECK(satRuleBody(ev2, inst, World::H) == Sat3::False);
        Evaluator ev3(table, ht, &env);
        CHECK(satRuleBody(ev3, inst, World::T) == Sat3::False);
      }
    }
  }

  // constant binding is interpretation independent
  {
    Program pc = parseProgram("p(Y) :- Y =[nat]{ 2 + 3 }.");
    GroundProgram gc = groundProgram(pc, {});
    REQUIRE(gc.rules.size() == 1);
    AtomTable table;
    AtomBits none;
    HTInterpretation ht = HTInterpretation::total(none);
    RangeEnv env;
    Evaluator ev(table, ht, &env);
    auto insts = resolveLazy(gc.rules[0], ev);
    REQUIRE(insts.size() == 1);
    CHECK(insts[0].head.atom->str() == "p(5)");
  }
}

TEST_CASE("lazy shortcut agrees with brute-force substitution") {
  // substituting every domain value for the deferred variable yields the
  // same satisfaction verdict as the two-instance shortcut
  Program p = parseProgram(
      "q(1). q(4).\n"
      "p(Y) :- Y =[int]{ q(I) * I }.\n");
  GroundProgram g = groundProgram(p, {});
  const GroundRule* lazyRule = nullptr;
  for (const auto& r : g.rules)
    if (!r.lazy.empty()) lazyRule = &r;
  REQUIRE(lazyRule != nullptr);

  AtomTable table;
  for (size_t i = 0; i < g.base.size(); ++i) table.intern(g.base.atom(static_cast<int>(i)));
  table.intern(parseFacts("p(5).")[0]);
  table.intern(parseFacts("p(4).")[0]);

  size_t n = table.size();
  for (uint64_t tm = 0; tm < (uint64_t{1} << n); ++tm) {
    for (uint64_t hm = tm;; hm = (hm - 1) & tm) {
      AtomBits tb(n, false), hb(n, false);
      for (size_t i = 0; i < n; ++i) {
        tb[i] = (tm >> i) & 1;
        hb[i] = (hm >> i) & 1;
      }
      HTInterpretation ht(hb, tb);
      RangeEnv env = g.envFor(*lazyRule, table, tb);

      Evaluator ev(table, ht, &env);
      bool viaShortcut = true;
      for (const auto& inst : resolveLazy(*lazyRule, ev)) {
        Evaluator evi(table, ht, &env);
        if (satRule(evi, inst, World::H) != Sat3::True) viaShortcut = false;
      }

      bool viaBrute = true;
      for (const auto& v : {Value::ofInt(0), Value::ofInt(1), Value::ofInt(4),
                            Value::ofInt(5), Value::ofInt(9), Value::ofInt(-1)}) {
        Subst s;
        s["Y"] = Term::value(v);
        Rule inst = substitute(lazyRule->closed, s);
        Evaluator evi(table, ht, &env);
        if (satRule(evi, inst, World::H) != Sat3::True) viaBrute = false;
      }
      CHECK(viaShortcut == viaBrute);
      if (hm == 0) break;
    }
  }
}

TEST_CASE("ground dump round-trips through the parser") {
  Program p = desugarProgram(parseProgram(
      "s(1). s(2).\n"
      "2 <=c[int]{ not not s(X) * (s(X) -> in(X)) * X }.\n"));
  GroundProgram g = groundProgram(p, {});
  std::string dump = dumpGround(g);
  ParseOptions opts;
  opts.allowInternalNames = true;
  Program back = parseProgram(dump, opts);
  CHECK(back.rules.size() == g.rules.size());
}

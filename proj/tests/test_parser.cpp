#include <doctest.h>

#include "acsolve/parser.hpp"
#include "acsolve/printer.hpp"

using namespace acsolve;

namespace {

Rule parseRule(const std::string& text) {
  Program p = parseProgram(text);
  REQUIRE(p.rules.size() == 1);
  return p.rules[0];
}

void checkRoundTrip(const std::string& text) {
  Program p1 = parseProgram(text);
  std::string printed = printProgram(p1);
  CAPTURE(text);
  CAPTURE(printed);
  Program p2 = parseProgram(printed);
  CHECK(equal(p1, p2));
  CHECK(printProgram(p2) == printed);
}

}  // namespace

TEST_CASE("local and global variable classification") {
  Rule r1 = parseRule("loc_sum(Y) :- Y =[rat]{ ind(I) * loc_weight(I,W) * W }.");
  CHECK(r1.globals == std::set<std::string>{"Y"});
  CHECK(r1.locals == std::set<std::string>{"I", "W"});

  Rule r2 = parseRule("glob_sum(Y) :- glob_weight(W), Y =[rat]{ ind(I) * W }.");
  CHECK(r2.globals == std::set<std::string>{"Y", "W"});
  CHECK(r2.locals == std::set<std::string>{"I"});

  // X occurs in the head atom, hence global
  Rule r3 = parseRule("q(X) :- 1 =[bool]{ p(X) + r(X) }.");
  CHECK(r3.globals == std::set<std::string>{"X"});
  CHECK(r3.locals.empty());
}

TEST_CASE("facts and empty bodies") {
  Rule f1 = parseRule("p :- .");
  CHECK(f1.head.kind == Head::Kind::Atom);
  CHECK(f1.body.empty());
  Rule f2 = parseRule("p.");
  CHECK(equal(f1, f2));
  Rule c = parseRule("bot :- not p.");
  CHECK(c.head.kind == Head::Kind::Bottom);
  CHECK(c.body.size() == 1);
  CHECK(c.body[0].negated);
  Rule c2 = parseRule(":- not p.");
  CHECK(equal(c, c2));
}

TEST_CASE("constraint forms") {
  Rule r = parseRule("10 <=c[nat]{ p(X) * q(X) } :- .");
  REQUIRE(r.head.kind == Head::Kind::Constraint);
  CHECK(r.head.cons->choice);
  CHECK(r.head.cons->cmp == CmpOp::Le);
  CHECK(r.head.cons->ring == lookupSemiring("nat"));
  CHECK(r.head.cons->lhs == Term::value(Value::ofInt(10)));

  Rule neg = parseRule("p :- not 3 =[int]{ q(X) * X }.");
  CHECK(neg.body[0].negated);
  CHECK(neg.body[0].isConstraint());

  CHECK_THROWS_AS(parseProgram("p :- 10 <=c[nat]{ q }."), ParseError);  // choice in body
  CHECK_THROWS_AS(parseProgram("p :- 1 =[real]{ q }."), ParseError);    // unknown ring
  CHECK_THROWS_AS(parseProgram("p :- q(_V1)."), ParseError);            // reserved name
  CHECK_THROWS_AS(parseProgram("p(a). p(a,b)."), ParseError);           // arity clash
}

TEST_CASE("weighted expression structure") {
  Rule r = parseRule("3 <=[int]{ not not s(X) * (s(X) -> in(X)) * X } :- .");
  const WeightedPtr& b = r.head.cons->body;
  REQUIRE(b->kind == Weighted::Kind::Times);
  CHECK(b->rhs->kind == Weighted::Kind::Var);
  REQUIRE(b->lhs->kind == Weighted::Kind::Times);
  const WeightedPtr& nn = b->lhs->lhs;
  REQUIRE(nn->kind == Weighted::Kind::Embed);
  CHECK(nn->phi->isNegation());
  CHECK(nn->phi->lhs->isNegation());
  const WeightedPtr& imp = b->lhs->rhs;
  REQUIRE(imp->kind == Weighted::Kind::Embed);
  CHECK(imp->phi->kind == Formula::Kind::Implies);

  // precedence: * binds tighter than +, + tighter than ->
  Rule pr = parseRule("p :- 1 =[int]{ a + b * c -> d }.");
  const WeightedPtr& w = pr.body[0].cons->body;
  REQUIRE(w->kind == Weighted::Kind::Implies);
  CHECK(w->lhs->kind == Weighted::Kind::Plus);
  CHECK(w->lhs->rhs->kind == Weighted::Kind::Times);

  // pure formulas keep their connective structure
  Rule fr = parseRule("p :- 1 =[bool]{ a & b | c }.");
  const WeightedPtr& fw = fr.body[0].cons->body;
  REQUIRE(fw->kind == Weighted::Kind::Embed);
  CHECK(fw->phi->kind == Formula::Kind::Or);
  CHECK(fw->phi->lhs->kind == Formula::Kind::And);
}

TEST_CASE("negative literals and infinities in value positions") {
  Rule r = parseRule("s(-3) :- 2 >=[maxtrop]{ p(X) * -1/2 + -inf }.");
  CHECK(r.body[0].cons->body->kind == Weighted::Kind::Plus);
  CHECK(r.body[0].cons->body->rhs->k == Value::negInf());
  CHECK(r.head.atom->args[0] == Term::value(Value::ofInt(-3)));
}

TEST_CASE("conditional sugar") {
  Rule r = parseRule("p :- 1 =[bool]{ (1 | 0 : p)@alt + 1 }.");
  const WeightedPtr& w = r.body[0].cons->body;
  REQUIRE(w->kind == Weighted::Kind::Plus);
  REQUIRE(w->lhs->kind == Weighted::Kind::Conditional);
  CHECK(w->lhs->mode == CondMode::Alt);
  CHECK(w->lhs->lhs->k == Value::ofInt(1));
  CHECK(w->lhs->rhs->k == Value::ofInt(0));

  // parenthesised pure disjunction is not a conditional
  Rule d = parseRule("p :- 1 =[bool]{ (a | b) }.");
  CHECK(d.body[0].cons->body->kind == Weighted::Kind::Embed);
  CHECK(d.body[0].cons->body->phi->kind == Formula::Kind::Or);
}

TEST_CASE("aggregates and disjunctive heads parse") {
  Rule agg = parseRule("p :- T >= sum{ X : q(X), X : r(X) }.");
  REQUIRE(agg.body[0].isAggregate());
  CHECK(agg.body[0].agg->kind == AggKind::Sum);
  CHECK(agg.body[0].agg->elems.size() == 2);

  Rule cnt = parseRule("p :- 2 <= count{ q(X) }.");
  CHECK(cnt.body[0].agg->kind == AggKind::Count);
  CHECK(!cnt.body[0].agg->elems[0].weight.has_value());

  Rule dis = parseRule("a | b :- c.");
  CHECK(dis.head.kind == Head::Kind::Disjunction);
  CHECK(dis.head.disj.size() == 2);
}

TEST_CASE("sigma closure") {
  Rule r1 = parseRule("loc_sum(Y) :- Y =[rat]{ ind(I) * loc_weight(I,W) * W }.");
  Rule c1 = sigmaClosure(r1);
  const WeightedPtr& b = c1.body[0].cons->body;
  REQUIRE(b->kind == Weighted::Kind::Sum);
  CHECK(b->boundVar == "I");
  REQUIRE(b->lhs->kind == Weighted::Kind::Sum);
  CHECK(b->lhs->boundVar == "W");
  CHECK(b->lhs->lhs->kind == Weighted::Kind::Times);

  // W is global in rule (2); only I gets bound
  Rule r2 = parseRule("glob_sum(Y) :- glob_weight(W), Y =[rat]{ ind(I) * W }.");
  Rule c2 = sigmaClosure(r2);
  const WeightedPtr& b2 = c2.body[1].cons->body;
  REQUIRE(b2->kind == Weighted::Kind::Sum);
  CHECK(b2->boundVar == "I");
  CHECK(b2->lhs->kind == Weighted::Kind::Times);

  // locally ground rules are unchanged
  Rule g = parseRule("p :- 1 =[bool]{ a + b }.");
  CHECK(equal(sigmaClosure(g), g));
}

TEST_CASE("parse/print round trip") {
  for (const char* text : {
           "p :- q, not r.",
           "loc_sum(Y) :- Y =[rat]{ ind(I) * loc_weight(I, W) * W }.",
           "glob_sum(Y) :- glob_weight(W), Y =[rat]{ ind(I) * W }.",
           "3 <=[int]{ not not s(X) * (s(X) -> in(X)) * X }.",
           "10 <=c[nat]{ not not q(X) * (q(X) -> p(X)) * W }.",
           "a | b | c :- d, not e.",
           "p :- T >= sum[rat]{ X : q(X), X : r(X) }.",
           "p :- 2 <= count{ q(X) }.",
           "bot :- not p.",
           "p :- 1 =[bool]{ (1 | 0 : p)@alt + 1 }.",
           "p :- 1 =[int]{ (1 | 0 : q)@df }.",
           "s({a,b}) :- X >=[pset:a,b,c]{ u(Y) * {a} + {b,c} }.",
           "domain {a, b}. p(a).",
           "w(1/2) :- 0 <[maxtrop]{ p(X) * X + -inf }.",
           "p :- X =[nat-inf]{ q(I) * inf }.",
           "r :- 1 !=[bool]{ a }, 2 !<=[nat]{ b }, 3 !>[int]{ c }.",
           "p :- 1 =[bool]{ a & b | c -> d }.",
           "p :- 1 =[rat]{ inv(2/3) * -(5) }.",
       }) {
    checkRoundTrip(text);
  }
}

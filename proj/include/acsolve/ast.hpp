#ifndef ACSOLVE_AST_HPP
#define ACSOLVE_AST_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acsolve/semiring.hpp"
#include "acsolve/value.hpp"

namespace acsolve {

// Terms are flat: constant symbols, semiring values or variables.
class Term {
 public:
  enum class Kind { Constant, Value, Var };

  static Term constant(std::string sym) { return Term(Kind::Constant, std::move(sym), Value()); }
  static Term value(Value v) { return Term(Kind::Value, "", std::move(v)); }
  static Term var(std::string name) { return Term(Kind::Var, std::move(name), Value()); }

  Term() : kind_(Kind::Constant) {}

  Kind kind() const { return kind_; }
  bool isVar() const { return kind_ == Kind::Var; }
  bool isConstant() const { return kind_ == Kind::Constant; }
  bool isValue() const { return kind_ == Kind::Value; }
  const std::string& name() const { return name_; }
  const Value& val() const { return val_; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.val_ == b.val_;
  }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    if (a.name_ != b.name_) return a.name_ < b.name_;
    return a.val_ < b.val_;
  }
  std::string str() const;

 private:
  Term(Kind k, std::string n, Value v) : kind_(k), name_(std::move(n)), val_(std::move(v)) {}
  Kind kind_;
  std::string name_;
  Value val_;
};

struct Atom {
  std::string pred;
  std::vector<Term> args;

  bool ground() const {
    for (const auto& t : args)
      if (t.isVar()) return false;
    return true;
  }
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.pred == b.pred && a.args == b.args;
  }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.args < b.args;
  }
  std::string str() const;
};

class Weighted;
using WeightedPtr = std::shared_ptr<const Weighted>;

// Unweighted sigma-formulas as they occur inside weighted expressions and
// rule literals. Negation is sugar: not f == Implies(f, Bottom).
class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct AlgebraicConstraint;
using ConstraintPtr = std::shared_ptr<const AlgebraicConstraint>;

class Formula {
 public:
  enum class Kind { Bottom, Atomic, And, Or, Implies, Constraint };

  static FormulaPtr bottom();
  static FormulaPtr atomic(Atom a);
  static FormulaPtr constraint(ConstraintPtr c);
  static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr implies(FormulaPtr l, FormulaPtr r);
  static FormulaPtr negate(FormulaPtr f) { return implies(std::move(f), bottom()); }

  Kind kind;
  Atom atom;            // Atomic
  FormulaPtr lhs, rhs;  // binary nodes
  ConstraintPtr cons;   // Constraint

  bool isNegation() const { return kind == Kind::Implies && rhs->kind == Kind::Bottom; }

 private:
  Formula() : kind(Kind::Bottom) {}
  friend struct FormulaFactory;
};

enum class CondMode { Alt, Vc, Df };

// Weighted formulas over a semiring (the constraint bodies). Sum/Prod bind a
// single variable; the sigma-closure nests them. Conditional is surface
// sugar removed by desugaring.
class Weighted {
 public:
  enum class Kind { Const, Var, Embed, Implies, Plus, Times, Neg, Inv, Sum, Prod, Conditional };

  static WeightedPtr constant(Value v);
  static WeightedPtr var(std::string name);
  static WeightedPtr embed(FormulaPtr f);
  static WeightedPtr implies(WeightedPtr l, WeightedPtr r);
  static WeightedPtr plus(WeightedPtr l, WeightedPtr r);
  static WeightedPtr times(WeightedPtr l, WeightedPtr r);
  static WeightedPtr neg(WeightedPtr x);
  static WeightedPtr inv(WeightedPtr x);
  static WeightedPtr sum(std::string v, WeightedPtr body);
  static WeightedPtr prod(std::string v, WeightedPtr body);
  static WeightedPtr conditional(WeightedPtr thenW, WeightedPtr elseW, FormulaPtr cond,
                                 CondMode mode);

  Kind kind;
  Value k;                 // Const
  std::string boundVar;    // Var name / Sum/Prod bound variable
  FormulaPtr phi;          // Embed / Conditional condition
  WeightedPtr lhs, rhs;    // binary; Sum/Prod body and Conditional branches in lhs/rhs
  CondMode mode = CondMode::Alt;

 private:
  Weighted() : kind(Kind::Const) {}
  friend struct WeightedFactory;
};

struct AlgebraicConstraint {
  Term lhs;  // Value or Var
  CmpOp cmp = CmpOp::Eq;
  std::string ringSpec;
  const Semiring* ring = nullptr;
  WeightedPtr body;
  bool choice = false;  // the `c` marker, heads only
};

enum class AggKind { Sum, Count, Max, Min, Times, Avg };

struct AggElement {
  std::optional<Term> weight;  // absent for count
  Atom atom;
};

// Surface aggregate literal `BOUND CMP kind[ring]{ elems }`; removed by
// desugaring.
struct Aggregate {
  Term bound;
  CmpOp cmp = CmpOp::Eq;
  AggKind kind = AggKind::Sum;
  std::optional<std::string> ringSpec;
  std::vector<AggElement> elems;
};

struct Literal {
  bool negated = false;
  // exactly one of the three is set
  std::optional<Atom> atom;
  ConstraintPtr cons;
  std::optional<Aggregate> agg;

  bool isAtom() const { return atom.has_value(); }
  bool isConstraint() const { return cons != nullptr; }
  bool isAggregate() const { return agg.has_value(); }
};

struct Head {
  enum class Kind { Bottom, Atom, Constraint, Disjunction };
  Kind kind = Kind::Bottom;
  std::optional<Atom> atom;
  ConstraintPtr cons;
  std::vector<Atom> disj;

  static Head bottom() { return Head{}; }
  static Head ofAtom(Atom a) {
    Head h;
    h.kind = Kind::Atom;
    h.atom = std::move(a);
    return h;
  }
  static Head ofConstraint(ConstraintPtr c) {
    Head h;
    h.kind = Kind::Constraint;
    h.cons = std::move(c);
    return h;
  }
  static Head ofDisjunction(std::vector<Atom> as) {
    Head h;
    h.kind = Kind::Disjunction;
    h.disj = std::move(as);
    return h;
  }
};

struct Rule {
  Head head;
  std::vector<Literal> body;
  // computed by classifyVariables
  std::set<std::string> globals;
  std::set<std::string> locals;
};

struct Program {
  std::vector<Rule> rules;
  std::set<std::string> declaredDomain;
};

// Variable scope per the local/global definition: a variable is local when
// it occurs only inside weighted formulas, global otherwise. Constraint
// left-hand sides and atom arguments are non-weighted positions.
void classifyVariables(Rule& r);
void classifyVariables(Program& p);

// Wraps every weighted formula of the rule in Sum binders over exactly its
// local variables (in order of first occurrence); globals stay free.
Rule sigmaClosure(const Rule& r);

// Sort of each variable: the set of semirings it stands for a value of.
// Empty set = plain domain sort. Throws TypeError on empty carrier
// intersections (e.g. nat with pset).
std::map<std::string, std::vector<const Semiring*>> variableSorts(const Rule& r);

// Collects the variables occurring in a weighted formula / formula / atom.
void collectVars(const Term& t, std::set<std::string>& out);
void collectVars(const Atom& a, std::set<std::string>& out);
void collectVars(const FormulaPtr& f, std::set<std::string>& out);
void collectVars(const WeightedPtr& w, std::set<std::string>& out);

// Free variables of a weighted formula (Sum/Prod-bound ones excluded).
void freeVars(const WeightedPtr& w, std::set<std::string>& out);

// Structural equality.
bool equal(const FormulaPtr& a, const FormulaPtr& b);
bool equal(const WeightedPtr& a, const WeightedPtr& b);
bool equal(const AlgebraicConstraint& a, const AlgebraicConstraint& b);
bool equal(const Rule& a, const Rule& b);
bool equal(const Program& a, const Program& b);

// Substitution of variables by terms.
using Subst = std::map<std::string, Term>;
Term substitute(const Term& t, const Subst& s);
Atom substitute(const Atom& a, const Subst& s);
FormulaPtr substitute(const FormulaPtr& f, const Subst& s);
WeightedPtr substitute(const WeightedPtr& w, const Subst& s);
ConstraintPtr substitute(const ConstraintPtr& c, const Subst& s);
Rule substitute(const Rule& r, const Subst& s);

// alpha^{not not}: adds double negation in front of every atom occurring in
// embedded formulas, making the value T-world-stable.
WeightedPtr doubleNegateAtoms(const WeightedPtr& w);
FormulaPtr doubleNegateAtoms(const FormulaPtr& f);

}  // namespace acsolve

#endif

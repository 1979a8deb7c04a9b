#ifndef ACSOLVE_DESUGAR_HPP
#define ACSOLVE_DESUGAR_HPP

#include <optional>
#include <utility>

#include "acsolve/ast.hpp"

namespace acsolve {

// Generates program-unique variable names in the reserved `_V<n>` space.
class FreshVars {
 public:
  std::string next() { return "_V" + std::to_string(++n_); }

 private:
  int n_ = 0;
};

// k ~c alpha <- B   stands for   k ~ alpha <- B   and
// X = alpha <- X = alpha^{not not}, B   with X fresh.
std::pair<Rule, Rule> expandChoice(const Rule& r, FreshVars& fresh);

// Conditional (s' | s'' : phi) under one of the three semantics; vc adds an
// auxiliary body constraint 1 =[bool]{ phi + not phi }.
std::pair<WeightedPtr, std::optional<Literal>> encodeConditional(
    const WeightedPtr& thenW, const WeightedPtr& elseW, const FormulaPtr& cond,
    CondMode mode, const Semiring& ring);

// a1 | ... | an  as the head constraint 1 =[bool]{ a1 + ... + an }.
ConstraintPtr encodeDisjunction(const std::vector<Atom>& atoms);

// Body aggregate literal as a single algebraic constraint. min is rewritten
// as max of negated weights over the tropical semiring, so it requires
// constant weights and a constant bound. times is not expressible with one
// constraint; avg is expanded at the program level instead.
ConstraintPtr encodeAggregate(const Aggregate& agg);

// Eliminates all surface sugar: disjunctive heads, aggregates, conditionals
// and choice heads. Output rules are plain AC-rules with classified
// variables.
Program desugarProgram(const Program& p);

}  // namespace acsolve

#endif

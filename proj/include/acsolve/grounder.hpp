#ifndef ACSOLVE_GROUNDER_HPP
#define ACSOLVE_GROUNDER_HPP

#include <map>
#include <set>
#include <memory>
#include <string>
#include <vector>

#include "acsolve/ast.hpp"
#include "acsolve/evaluator.hpp"
#include "acsolve/interpretation.hpp"

namespace acsolve {

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite grounding domain: the constant symbols and semiring values that
// occur in the program and edb, plus declared domain constants.
struct Domain {
  std::vector<std::string> constants;
  std::vector<Value> values;

  // All elements admissible for a variable of the given sort. A plain sort
  // (no rings) ranges over every element; ring sorts range over the values
  // the carrier intersection admits, in the first ring's canonical form.
  std::vector<Term> rangeFor(const std::vector<const Semiring*>& sort) const;
};

Domain herbrandDomain(const Program& p, const std::vector<Atom>& edb);

struct LazyBinding {
  std::string var;
  size_t bodyIndex;  // position of the binding constraint in the rule body
};

struct GroundRule {
  Rule ast;     // deferred variables may remain; printable
  Rule closed;  // sigma-closed form used for evaluation
  std::vector<LazyBinding> lazy;
  // sorts of the Sum-bound locals, for range construction
  std::map<std::string, std::vector<const Semiring*>> localSorts;
  // test hook: ranges reported as infinite, driving the undefined-semantics
  // path that distinguishes weak from strong equilibria
  std::set<std::string> infiniteVars;
};

struct GroundConfig {
  size_t instanceBudget = 1000000;
};

struct GroundProgram {
  std::vector<GroundRule> rules;
  AtomTable base;  // candidate ground atoms
  Domain domain;
  Program source;  // desugared rules plus edb facts; definite programs are
                   // re-instantiated dynamically against the interpretation
  std::vector<std::string> warnings;

  // Static Sum ranges from the domain alone; candidate interpretations may
  // extend them with their own atom-argument values.
  RangeEnv staticEnv(const GroundRule& r) const;
  // Ranges extended by the values and symbols occurring in interpretation
  // atoms (the atoms are ids into `table`).
  RangeEnv envFor(const GroundRule& r, const AtomTable& table,
                  const AtomBits& there) const;
};

GroundProgram groundProgram(const Program& p, const std::vector<Atom>& edb,
                            const GroundConfig& cfg = {},
                            const Domain* domainOverride = nullptr);

// The deferred variables of a rule: bound by a positive body equality, not
// occurring in any body weighted formula and not bound by a positive atom.
std::vector<LazyBinding> deferredBindings(const Rule& r);

// Sum ranges for the given local sorts: domain values plus the values and
// symbols occurring in the interpretation's atoms.
RangeEnv buildRanges(const std::map<std::string, std::vector<const Semiring*>>& sorts,
                     const Domain& dom, const AtomTable& table, const AtomBits& there,
                     const std::set<std::string>& infiniteVars = {});

// Instantiates the deferred value bindings of a lazy ground rule against a
// fixed interpretation. Only the values [[alpha]](I_T) and [[alpha]](I_H)
// can satisfy the equality, so at most two instances arise per binding.
std::vector<Rule> resolveLazy(const GroundRule& gr, Evaluator& ev);

// The instances that matter for satisfaction checking: every binding is
// pinned to its T-world value (other instances have unsatisfiable bodies at
// every world).
Rule resolveLazyAtT(const GroundRule& gr, Evaluator& ev, bool& defined);

std::string dumpGround(const GroundProgram& g);

}  // namespace acsolve

#endif

#ifndef ACSOLVE_SOLVER_HPP
#define ACSOLVE_SOLVER_HPP

#include <optional>
#include <vector>

#include "acsolve/grounder.hpp"

namespace acsolve {

// Weak equilibria treat an undefined evaluation at (I', M, H) as
// non-satisfaction (the subset does not block); strong equilibria treat it
// as blocking. The two coincide whenever all ranges are finite.
enum class EqMode { Weak, Strong };

struct SolveConfig {
  EqMode mode = EqMode::Strong;
  std::optional<size_t> maxModels;
  size_t candidateBudget = size_t{1} << 22;
  size_t closureRounds = 500;
  int threads = 1;
};

struct SolveResult {
  std::vector<std::vector<Atom>> models;  // sorted atom vectors, (size, lex) order
  bool definitePath = false;
};

struct SEResult {
  bool equivalent = true;
  std::optional<std::pair<std::vector<Atom>, std::vector<Atom>>> witness;  // (here, there)
  bool firstSatisfiesWitness = false;
};

// (here, there, H) satisfies every rule, with deferred bindings resolved
// against the interpretation.
bool checkHtModel(const GroundProgram& g, const std::vector<Atom>& here,
                  const std::vector<Atom>& there);

// M is a model at H and no proper subset is.
bool checkEquilibrium(const GroundProgram& g, const std::vector<Atom>& M,
                      const SolveConfig& cfg = {});

// All equilibrium models in deterministic (cardinality, lexicographic)
// order. Candidate T-sets are subsets of the atom base, each extended by
// the value atoms its own deferred bindings derive. Definite programs
// (atom heads, no negation) go through a least-fixpoint path instead of
// enumeration.
SolveResult enumerateEquilibrium(const GroundProgram& g, const SolveConfig& cfg = {});

// HT-model comparison over the union atom base; programs are desugared and
// grounded over their combined constants first.
SEResult strongEquivalence(const Program& p1, const Program& p2,
                           const SolveConfig& cfg = {});

// One-shot compiled evaluation for ground formulas: atoms resolve to table
// ids once, evaluation is allocation-free. Used by property suites that
// evaluate the same formula under many interpretations.
class CompiledFormula {
 public:
  CompiledFormula(const FormulaPtr& f, const AtomTable& table);
  bool sat(const HTInterpretation& I, World w) const;

 private:
  std::shared_ptr<void> impl_;
};

class CompiledWeighted {
 public:
  CompiledWeighted(const WeightedPtr& w, const Semiring& ring, const AtomTable& table,
                   const RangeEnv* env = nullptr);
  Value eval(const HTInterpretation& I, World w) const;

 private:
  std::shared_ptr<void> impl_;
  const Semiring* ring_;
};

}  // namespace acsolve

#endif

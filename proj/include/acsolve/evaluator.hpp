#ifndef ACSOLVE_EVALUATOR_HPP
#define ACSOLVE_EVALUATOR_HPP

#include <map>
#include <optional>
#include <vector>

#include "acsolve/ast.hpp"
#include "acsolve/interpretation.hpp"

namespace acsolve {

// Finite per-variable ranges for Sum/Prod binders. The infinite marker is a
// synthetic test hook: grounded programs always produce finite ranges, but
// the undefined-semantics path (weak vs strong equilibria) must exist.
struct VarRange {
  bool infiniteMarker = false;
  std::vector<Term> elems;
};

class RangeEnv {
 public:
  void set(const std::string& var, VarRange r) { ranges_[var] = std::move(r); }
  const VarRange* find(const std::string& var) const {
    auto it = ranges_.find(var);
    return it == ranges_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, VarRange> ranges_;
};

// Three-valued satisfaction; Undef only arises from weighted formulas with
// infinite supports (the synthetic marker above).
enum class Sat3 { False, True, Undef };

inline Sat3 sat3Of(bool b) { return b ? Sat3::True : Sat3::False; }

// Evaluation result of a weighted formula; nullopt encodes "undefined".
using EvalResult = std::optional<Value>;

class Evaluator {
 public:
  Evaluator(const AtomTable& table, const HTInterpretation& interp,
            const RangeEnv* env = nullptr)
      : table_(table), interp_(interp), env_(env) {}

  // Def. 1 satisfaction at a pointed interpretation; implication looks at
  // every world >= w.
  Sat3 sat(const FormulaPtr& f, World w);
  bool satBool(const FormulaPtr& f, World w);

  // k ~ [[alpha]](I_w') must hold for every w' >= w.
  Sat3 satConstraint(const AlgebraicConstraint& c, World w);

  // Fig. 1 semantics.
  EvalResult evalWeighted(const WeightedPtr& alpha, const Semiring& ring, World w);

  // Elements of `range` on which alpha(x) evaluates to a value different
  // from the unit of `which`.
  std::vector<Term> support(const WeightedPtr& alpha, const std::string& var,
                            const Semiring& ring, const std::vector<Term>& range,
                            RingOp which, World w);

  void bind(const std::string& var, Term t) { subst_.emplace_back(var, std::move(t)); }
  void unbind() { subst_.pop_back(); }

  // Direct atom test under the current bindings.
  bool holdsAtom(const Atom& a, World w) { return atomHolds(a, w); }

 private:
  const Term* lookup(const std::string& var) const;
  bool atomHolds(const Atom& a, World w);

  const AtomTable& table_;
  const HTInterpretation& interp_;
  const RangeEnv* env_;
  std::vector<std::pair<std::string, Term>> subst_;
  // ground-subformula satisfaction memo, valid while subst_ is empty; keys
  // own their nodes so recycled addresses cannot alias
  std::map<std::pair<FormulaPtr, World>, Sat3> satCache_;
};

// Rule satisfaction at a pointed HT-interpretation: the rule formula
// (B -> H)^Sigma with globals assumed already instantiated. `locals` drive
// the implicit sigma-closure of constraint bodies.
Sat3 satRule(Evaluator& ev, const Rule& closedRule, World w);

// Conjunction of the rule's body literals at w (negated literals use the
// implication reading).
Sat3 satRuleBody(Evaluator& ev, const Rule& closedRule, World w);

// Unweighted-to-weighted translation: [[tau(phi)]](I_w) is one when phi is
// satisfied and zero otherwise. Needs an invertible or idempotent addition.
WeightedPtr tauTranslate(const FormulaPtr& phi, const Semiring& ring);

}  // namespace acsolve

#endif

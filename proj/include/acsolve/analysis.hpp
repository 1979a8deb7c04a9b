#ifndef ACSOLVE_ANALYSIS_HPP
#define ACSOLVE_ANALYSIS_HPP

#include <set>
#include <string>
#include <vector>

#include "acsolve/ast.hpp"

namespace acsolve {

// Which solver paths are legal for a program. Ground and safe-decidable
// programs can be solved outright; safe-general programs (value invention or
// unrestricted head constraints) are model-checkable and solvable only when
// the bounded lazy closure converges. SAT for the general safe fragment is
// undecidable.
enum class Fragment { Ground, SafeDecidable, SafeGeneral, Unsafe };

const char* fragmentName(Fragment f);

struct FormulaCheck {
  std::string text;
  bool sdi = false;
};

struct RuleAnalysis {
  bool safe = true;
  std::string violation;
  bool headConstraint = false;
  bool headDomainRestricted = false;
  std::vector<FormulaCheck> formulas;
};

struct AnalysisReport {
  std::vector<RuleAnalysis> rules;
  bool valueInvention = false;
  bool finitelyGroundable = false;
  Fragment fragment = Fragment::Ground;

  bool allSafe() const {
    for (const auto& r : rules)
      if (!r.safe) return false;
    return true;
  }
  std::string toText() const;
  std::string toJson() const;
};

// Syntactic domain independence of a weighted formula w.r.t. a variable
// set, following the two-level guarded grammar. Everything is trivially
// domain independent w.r.t. the empty set.
bool checkSdi(const WeightedPtr& alpha, const std::set<std::string>& vars);
bool checkSdi(const FormulaPtr& phi, const std::set<std::string>& vars);

// Head-constraint shape k ~ not not a(X) * (a(X) -> b(X)) * g(X) with a, b
// syntactically domain independent and the atoms of g locally ground.
bool checkDomainRestricted(const AlgebraicConstraint& c, const std::set<std::string>& locals);

// Body constraints X = alpha whose computed values can reach atom arguments
// and thereby grow the ground-atom universe.
bool checkValueInvention(const Program& p);

AnalysisReport checkSafety(const Program& p);

}  // namespace acsolve

#endif

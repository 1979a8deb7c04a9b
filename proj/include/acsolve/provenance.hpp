#ifndef ACSOLVE_PROVENANCE_HPP
#define ACSOLVE_PROVENANCE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acsolve/ast.hpp"

namespace acsolve {

// Positive datalog: atom heads, conjunctions of atoms as bodies. Extensional
// predicates are those that never occur in a head; their ground atoms carry
// the semiring labels.
struct DRule {
  Atom head;
  std::vector<Atom> body;
};

struct DatalogProgram {
  std::vector<DRule> rules;
  std::set<std::string> edbPredicates;
};

DatalogProgram parseDatalog(const std::string& text);

using EdbLabels = std::vector<std::pair<Atom, Value>>;
EdbLabels parseEdbLabels(const std::string& text, const Semiring& ring);

struct ProvenanceTable {
  std::map<Atom, Value> entries;  // derivable atoms only
  long leafBound = 0;
  bool converged = false;
  std::set<Atom> infiniteAtoms;  // nat-inf atoms with infinitely many
                                 // nonzero derivations
  // value of the trees with exactly l leaves, per derivable (atom, l)
  std::map<std::pair<Atom, long>, Value> perLeaf;

  std::string toText(bool machine = false) const;
  std::string toJson() const;
};

// Dynamic programming on (atom, leaf count): the label of an atom is the sum
// over derivation trees of the product of their leaf labels, accumulated by
// exact leaf count up to lmax. Rules are padded to at least two body atoms
// with a unit-labelled extensional atom so leaf counts strictly decrease.
ProvenanceTable computeProvenance(const DatalogProgram& d, const EdbLabels& edb,
                                  const Semiring& ring, long lmax);

// Reference semantics: explicitly enumerates derivation trees and folds their
// labels; only viable for tiny instances.
ProvenanceTable provenanceTreeOracle(const DatalogProgram& d, const EdbLabels& edb,
                                     const Semiring& ring, long lmax,
                                     size_t treeBudget = 200000);

// The AC-program that computes the provenance semantics: per-rule relations
// indexed by leaf count and last rule, aggregated per predicate, with
// derivability companions for safety. When truncateLeaves is set, the
// leaf-count sort is bounded by guard atoms (a test-harness device: the full
// translation quantifies leaf counts over all of N). Edb labels become
// per-leaf facts.
Program translateProvenance(const DatalogProgram& d, const std::string& ringSpec,
                            const EdbLabels& edb,
                            std::optional<long> truncateLeaves = std::nullopt);

}  // namespace acsolve

#endif

#ifndef ACSOLVE_INTERPRETATION_HPP
#define ACSOLVE_INTERPRETATION_HPP

#include <map>
#include <string>
#include <vector>

#include "acsolve/ast.hpp"

namespace acsolve {

// Interns ground atoms; ids are stable and append-only.
class AtomTable {
 public:
  int intern(const Atom& a) {
    auto it = index_.find(a);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(atoms_.size());
    atoms_.push_back(a);
    index_.emplace(a, id);
    return id;
  }
  int find(const Atom& a) const {
    auto it = index_.find(a);
    return it == index_.end() ? -1 : it->second;
  }
  const Atom& atom(int id) const { return atoms_[static_cast<size_t>(id)]; }
  size_t size() const { return atoms_.size(); }

 private:
  std::vector<Atom> atoms_;
  std::map<Atom, int> index_;
};

using AtomBits = std::vector<bool>;

// Pointed HT-interpretations are (here, there, world) with here <= there.
enum class World { H, T };

class HTInterpretation {
 public:
  HTInterpretation() = default;
  HTInterpretation(AtomBits here, AtomBits there)
      : here_(std::move(here)), there_(std::move(there)) {
    if (here_.size() < there_.size()) here_.resize(there_.size(), false);
    if (there_.size() < here_.size()) there_.resize(here_.size(), false);
    for (size_t i = 0; i < here_.size(); ++i)
      if (here_[i] && !there_[i])
        throw EvalError("HT-interpretation requires here to be a subset of there");
  }

  static HTInterpretation total(AtomBits m) {
    HTInterpretation i;
    i.here_ = m;
    i.there_ = std::move(m);
    return i;
  }

  bool contains(World w, int id) const {
    const AtomBits& b = w == World::H ? here_ : there_;
    return id >= 0 && static_cast<size_t>(id) < b.size() && b[static_cast<size_t>(id)];
  }
  const AtomBits& here() const { return here_; }
  const AtomBits& there() const { return there_; }
  AtomBits& mutableHere() { return here_; }

 private:
  AtomBits here_, there_;
};

// Line-based text form: one ground atom per line with optional '#here' /
// '#there' section headers; a missing '#here' section means here = there.
struct NamedInterpretation {
  std::vector<Atom> here;
  std::vector<Atom> there;
  bool hereSection = false;
};
NamedInterpretation parseInterpretation(const std::string& text);
std::string printInterpretation(const std::vector<Atom>& here, const std::vector<Atom>& there);

}  // namespace acsolve

#endif

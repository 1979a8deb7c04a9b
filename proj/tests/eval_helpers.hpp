#ifndef ACSOLVE_TESTS_EVAL_HELPERS_HPP
#define ACSOLVE_TESTS_EVAL_HELPERS_HPP

#include <string>
#include <vector>

#include "acsolve/evaluator.hpp"
#include "acsolve/parser.hpp"

namespace acsolve::testing {

// Fixture bundling an atom table with an HT-interpretation built from fact
// syntax, e.g. Interp world("p. q(1).", "p. q(1). r.").
struct Interp {
  AtomTable table;
  HTInterpretation ht;

  static std::string closed(std::string t) {
    while (!t.empty() && (t.back() == ' ' || t.back() == '\n')) t.pop_back();
    if (!t.empty() && t.back() != '.') t += '.';
    return t;
  }

  Interp(const std::string& here, const std::string& there) {
    auto hs = parseFacts(closed(here));
    auto ts = parseFacts(closed(there));
    for (const auto& a : hs) table.intern(a);
    for (const auto& a : ts) table.intern(a);
    AtomBits h(table.size(), false), t(table.size(), false);
    for (const auto& a : hs) h[table.intern(a)] = true;
    for (const auto& a : ts) t[table.intern(a)] = true;
    ht = HTInterpretation(std::move(h), std::move(t));
  }
  explicit Interp(const std::string& total) : Interp(total, total) {}

  Evaluator eval(const RangeEnv* env = nullptr) { return Evaluator(table, ht, env); }
};

inline WeightedPtr wparse(const std::string& ring, const std::string& body) {
  Program p = parseProgram("testhead :- 0 =[" + ring + "]{ " + body + " }.");
  return p.rules[0].body[0].cons->body;
}

inline FormulaPtr fparse(const std::string& body) {
  auto w = wparse("bool", body);
  if (w->kind != Weighted::Kind::Embed)
    throw std::runtime_error("not a pure formula: " + body);
  return w->phi;
}

inline ConstraintPtr cparse(const std::string& text) {
  Program p = parseProgram("p :- " + text + ".");
  return p.rules[0].body[0].cons;
}

}  // namespace acsolve::testing

#endif

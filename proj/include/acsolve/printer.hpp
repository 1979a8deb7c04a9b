#ifndef ACSOLVE_PRINTER_HPP
#define ACSOLVE_PRINTER_HPP

#include <string>

#include "acsolve/ast.hpp"

namespace acsolve {

// Canonical text form; parseProgram(printProgram(p)) reproduces p.
// Sum/Prod binders have no surface syntax (rules carry them implicitly);
// they print in a diagnostic-only notation.
std::string printProgram(const Program& p);
std::string printRule(const Rule& r);
std::string printLiteral(const Literal& l);
std::string printConstraint(const AlgebraicConstraint& c);
std::string printWeighted(const WeightedPtr& w);
std::string printFormula(const FormulaPtr& f);

}  // namespace acsolve

#endif

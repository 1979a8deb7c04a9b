#ifndef ACSOLVE_TESTS_HELPERS_HPP
#define ACSOLVE_TESTS_HELPERS_HPP

#include <random>
#include <vector>

#include "acsolve/semiring.hpp"

namespace acsolve::testing {

// Random carrier elements; exhaustive-style suites use enumerateSmall.
inline Value randomValue(const Semiring& s, std::mt19937& rng) {
  auto smallInt = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const std::string& n = s.name();
  if (n == "bool") return Value::ofInt(smallInt(0, 1));
  if (n == "nat") return Value::ofInt(smallInt(0, 40));
  if (n == "int") return Value::ofInt(smallInt(-40, 40));
  if (n == "rat") {
    int num = smallInt(-30, 30);
    int den = smallInt(1, 12);
    return Value::ofRat(Rat(num, den));
  }
  if (n == "nat-inf") {
    if (smallInt(0, 9) == 0) return Value::posInf();
    return Value::ofInt(smallInt(0, 40));
  }
  if (n == "maxtrop") {
    int pick = smallInt(0, 11);
    if (pick == 0) return Value::posInf();
    if (pick == 1) return Value::negInf();
    return Value::ofRat(Rat(smallInt(-30, 30), smallInt(1, 8)));
  }
  // pset: random subset of the universe
  const SymbolSet& u = s.one().asSet();
  SymbolSet out;
  for (const auto& sym : u)
    if (smallInt(0, 1)) out.insert(sym);
  return Value::ofSet(std::move(out));
}

inline std::vector<Value> enumerateSmall(const Semiring& s) {
  std::vector<Value> out;
  if (s.name() == "bool") {
    out.push_back(Value::ofInt(0));
    out.push_back(Value::ofInt(1));
    return out;
  }
  if (s.name().rfind("pset:", 0) == 0) {
    std::vector<std::string> u(s.one().asSet().begin(), s.one().asSet().end());
    for (size_t mask = 0; mask < (size_t{1} << u.size()); ++mask) {
      SymbolSet sub;
      for (size_t i = 0; i < u.size(); ++i)
        if (mask & (size_t{1} << i)) sub.insert(u[i]);
      out.push_back(Value::ofSet(std::move(sub)));
    }
    return out;
  }
  return out;
}

}  // namespace acsolve::testing

#endif

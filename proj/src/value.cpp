#include "acsolve/value.hpp"

#include <functional>
#include <sstream>

namespace acsolve {

std::string Value::str() const {
  switch (kind()) {
    case Kind::Int:
      return asInt().str();
    case Kind::Rat: {
      const Rat& q = std::get<Rat>(rep_);
      return numerator(q).str() + "/" + denominator(q).str();
    }
    case Kind::PosInf:
      return "inf";
    case Kind::NegInf:
      return "-inf";
    case Kind::Set: {
      std::ostringstream out;
      out << '{';
      bool first = true;
      for (const auto& s : asSet()) {
        if (!first) out << ',';
        out << s;
        first = false;
      }
      out << '}';
      return out.str();
    }
  }
  return "?";
}

size_t Value::hash() const {
  size_t h = rep_.index() * 1099511628211ull;
  auto mix = [&h](size_t x) { h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  switch (kind()) {
    case Kind::Int:
      mix(std::hash<std::string>{}(asInt().str()));
      break;
    case Kind::Rat:
      mix(std::hash<std::string>{}(str()));
      break;
    case Kind::Set:
      for (const auto& s : asSet()) mix(std::hash<std::string>{}(s));
      break;
    default:
      break;
  }
  return h;
}

std::string to_string(const Value& v) { return v.str(); }

}  // namespace acsolve

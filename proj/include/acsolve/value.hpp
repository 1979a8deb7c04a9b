#ifndef ACSOLVE_VALUE_HPP
#define ACSOLVE_VALUE_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

namespace acsolve {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using SymbolSet = std::set<std::string>;

// A semiring element. Numeric values are kept canonical: a rational whose
// denominator is 1 is always stored as an integer, so that the same number
// occurring in, say, a nat constraint and a rat constraint compares equal.
// Infinities are explicit tags, never sentinel numerics.
class Value {
 public:
  enum class Kind { Int, Rat, PosInf, NegInf, Set };

  Value() : rep_(Int(0)) {}

  static Value ofInt(Int i) { return Value(Rep(std::move(i))); }
  static Value ofInt(long i) { return Value(Rep(Int(i))); }
  static Value ofRat(const Rat& q) {
    if (denominator(q) == 1) return ofInt(numerator(q));
    return Value(Rep(q));
  }
  static Value posInf() { return Value(Rep(Pos{})); }
  static Value negInf() { return Value(Rep(Neg{})); }
  static Value ofSet(SymbolSet s) { return Value(Rep(std::move(s))); }

  Kind kind() const {
    switch (rep_.index()) {
      case 0: return Kind::Int;
      case 1: return Kind::Rat;
      case 2: return Kind::PosInf;
      case 3: return Kind::NegInf;
      default: return Kind::Set;
    }
  }
  bool isInt() const { return kind() == Kind::Int; }
  bool isRat() const { return kind() == Kind::Rat; }
  bool isPosInf() const { return kind() == Kind::PosInf; }
  bool isNegInf() const { return kind() == Kind::NegInf; }
  bool isSet() const { return kind() == Kind::Set; }
  bool isFiniteNumeric() const { return isInt() || isRat(); }

  const Int& asInt() const {
    if (!isInt()) throw TypeError("value is not an integer");
    return std::get<Int>(rep_);
  }
  // Numeric view; integers promote to p/1.
  Rat asRat() const {
    if (isInt()) return Rat(std::get<Int>(rep_));
    if (isRat()) return std::get<Rat>(rep_);
    throw TypeError("value is not a finite number");
  }
  const SymbolSet& asSet() const {
    if (!isSet()) throw TypeError("value is not a set");
    return std::get<SymbolSet>(rep_);
  }

  // Structural order for use in containers; not a semiring order.
  friend bool operator==(const Value& a, const Value& b) {
    return a.rep_ == b.rep_;
  }
  friend bool operator<(const Value& a, const Value& b) {
    if (a.rep_.index() != b.rep_.index()) return a.rep_.index() < b.rep_.index();
    switch (a.rep_.index()) {
      case 0: return std::get<Int>(a.rep_) < std::get<Int>(b.rep_);
      case 1: return std::get<Rat>(a.rep_) < std::get<Rat>(b.rep_);
      case 2:
      case 3: return false;
      default: return std::get<SymbolSet>(a.rep_) < std::get<SymbolSet>(b.rep_);
    }
  }

  std::string str() const;
  size_t hash() const;

 private:
  struct Pos {
    bool operator==(const Pos&) const = default;
  };
  struct Neg {
    bool operator==(const Neg&) const = default;
  };
  using Rep = std::variant<Int, Rat, Pos, Neg, SymbolSet>;
  explicit Value(Rep r) : rep_(std::move(r)) {}
  Rep rep_;
};

std::string to_string(const Value& v);

}  // namespace acsolve

#endif

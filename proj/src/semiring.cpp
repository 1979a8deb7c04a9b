#include "acsolve/semiring.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <sstream>

namespace acsolve {

const char* cmpToken(CmpOp op) {
  switch (op) {
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "=";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::NotGt: return "!>";
    case CmpOp::NotGe: return "!>=";
    case CmpOp::Ne: return "!=";
    case CmpOp::NotLe: return "!<=";
    case CmpOp::NotLt: return "!<";
  }
  return "?";
}

std::optional<CmpOp> cmpFromToken(const std::string& tok) {
  if (tok == ">") return CmpOp::Gt;
  if (tok == ">=") return CmpOp::Ge;
  if (tok == "=") return CmpOp::Eq;
  if (tok == "<=") return CmpOp::Le;
  if (tok == "<") return CmpOp::Lt;
  if (tok == "!>") return CmpOp::NotGt;
  if (tok == "!>=") return CmpOp::NotGe;
  if (tok == "!=") return CmpOp::Ne;
  if (tok == "!<=") return CmpOp::NotLe;
  if (tok == "!<") return CmpOp::NotLt;
  return std::nullopt;
}

std::optional<Value> Semiring::coerce(const Value& v) const {
  if (contains(v)) return v;
  return std::nullopt;
}

Value Semiring::neg(const Value&) const {
  throw UnsupportedError("semiring '" + name_ + "' has no additive inverse");
}

Value Semiring::inv(const Value&) const {
  throw UnsupportedError("semiring '" + name_ + "' has no multiplicative inverse");
}

void Semiring::requireCarrier(const Value& v) const {
  if (!contains(v))
    throw TypeError("value " + v.str() + " is not in the carrier of semiring '" +
                    name_ + "'");
}

bool Semiring::cmpSatisfied(const Value& lhs, CmpOp op, const Value& rhs) const {
  int c = compare(lhs, rhs);
  switch (op) {
    case CmpOp::Gt: return c > 0;
    case CmpOp::Ge: return c >= 0;
    case CmpOp::Eq: return c == 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::NotGt: return !(c > 0);
    case CmpOp::NotGe: return !(c >= 0);
    case CmpOp::Ne: return c != 0;
    case CmpOp::NotLe: return !(c <= 0);
    case CmpOp::NotLt: return !(c < 0);
  }
  return false;
}

Value Semiring::parseValue(const std::string& text) const {
  auto v = parseValueLiteral(text);
  if (!v) throw TypeError("malformed value literal '" + text + "'");
  auto c = coerce(*v);
  if (!c)
    throw TypeError("value " + v->str() + " is outside the carrier of semiring '" +
                    name_ + "'");
  return *c;
}

Value combine(const Semiring& s, RingOp op, const Value& a, const Value& b) {
  return op == RingOp::Add ? s.add(a, b) : s.mul(a, b);
}

Value invert(const Semiring& s, RingOp op, const Value& a) {
  return op == RingOp::Add ? s.neg(a) : s.inv(a);
}

int compareValues(const Semiring& s, const Value& a, const Value& b) {
  return s.compare(a, b);
}

namespace {

int ratCompare(const Value& a, const Value& b) {
  if (a.isInt() && b.isInt()) {
    const Int& x = a.asInt();
    const Int& y = b.asInt();
    return x < y ? -1 : (x == y ? 0 : 1);
  }
  Rat x = a.asRat();
  Rat y = b.asRat();
  return x < y ? -1 : (x == y ? 0 : 1);
}

class NumericRing : public Semiring {
 public:
  enum class Domain { Nat, Integer, Rational, Boolean };

  NumericRing(std::string name, Domain d)
      : Semiring(std::move(name), Value::ofInt(0), Value::ofInt(1),
                 /*addInv=*/d == Domain::Integer || d == Domain::Rational,
                 /*mulInv=*/d == Domain::Rational || d == Domain::Boolean,
                 /*mulComm=*/true,
                 /*addIdem=*/d == Domain::Boolean),
        dom_(d) {}

  bool contains(const Value& v) const override {
    switch (dom_) {
      case Domain::Boolean:
        return v.isInt() && (v.asInt() == 0 || v.asInt() == 1);
      case Domain::Nat:
        return v.isInt() && v.asInt() >= 0;
      case Domain::Integer:
        return v.isInt();
      case Domain::Rational:
        return v.isFiniteNumeric();
    }
    return false;
  }

  Value add(const Value& a, const Value& b) const override {
    requireCarrier(a);
    requireCarrier(b);
    if (dom_ == Domain::Boolean)
      return Value::ofInt((a.asInt() == 1 || b.asInt() == 1) ? 1 : 0);
    if (a.isInt() && b.isInt()) return Value::ofInt(a.asInt() + b.asInt());
    return Value::ofRat(a.asRat() + b.asRat());
  }

  Value mul(const Value& a, const Value& b) const override {
    requireCarrier(a);
    requireCarrier(b);
    if (dom_ == Domain::Boolean)
      return Value::ofInt((a.asInt() == 1 && b.asInt() == 1) ? 1 : 0);
    if (a.isInt() && b.isInt()) return Value::ofInt(a.asInt() * b.asInt());
    return Value::ofRat(a.asRat() * b.asRat());
  }

  Value neg(const Value& a) const override {
    if (!hasAddInverse()) return Semiring::neg(a);
    requireCarrier(a);
    if (a.isInt()) return Value::ofInt(-a.asInt());
    return Value::ofRat(-a.asRat());
  }

  Value inv(const Value& a) const override {
    if (!hasMulInverse()) return Semiring::inv(a);
    requireCarrier(a);
    if (compare(a, zero()) == 0) return zero();
    if (dom_ == Domain::Boolean) return a;
    return Value::ofRat(Rat(1) / a.asRat());
  }

  int compare(const Value& a, const Value& b) const override {
    requireCarrier(a);
    requireCarrier(b);
    return ratCompare(a, b);
  }

 private:
  Domain dom_;
};

class NatInfRing : public Semiring {
 public:
  NatInfRing()
      : Semiring("nat-inf", Value::ofInt(0), Value::ofInt(1), false, false, true,
                 false) {}

  bool contains(const Value& v) const override {
    return v.isPosInf() || (v.isInt() && v.asInt() >= 0);
  }

  Value add(const Value& a, const Value& b) const override {
    requireCarrier(a);
    requireCarrier(b);
    if (a.isPosInf() || b.isPosInf()) return Value::posInf();
    return Value::ofInt(a.asInt() + b.asInt());
  }

  Value mul(const Value& a, const Value& b) const override {
    requireCarrier(a);
    requireCarrier(b);
    // inf * m = inf for m != 0; multiplication by 0 annihilates.
    if ((a.isInt() && a.asInt() == 0) || (b.isInt() && b.asInt() == 0))
      return Value::ofInt(0);
    if (a.isPosInf() || b.isPosInf()) return Value::posInf();
    return Value::ofInt(a.asInt() * b.asInt());
  }

  int compare(const Value& a, const Value& b) const override {
    requireCarrier(a);
    requireCarrier(b);
    if (a.isPosInf()) return b.isPosInf() ? 0 : 1;
    if (b.isPosInf()) return -1;
    return ratCompare(a, b);
  }
};

class MaxTropRing : public Semiring {
 public:
  MaxTropRing()
      : Semiring("maxtrop", Value::negInf(), Value::ofInt(0), false, false, true,
                 true) {}

  bool contains(const Value& v) const override {
    return v.isFiniteNumeric() || v.isPosInf() || v.isNegInf();
  }

  Value add(const Value& a, const Value& b) const override {  // max
    requireCarrier(a);
    requireCarrier(b);
    return compare(a, b) >= 0 ? a : b;
  }

  Value mul(const Value& a, const Value& b) const override {  // +
    requireCarrier(a);
    requireCarrier(b);
    // -inf is the annihilating zero and wins over +inf.
    if (a.isNegInf() || b.isNegInf()) return Value::negInf();
    if (a.isPosInf() || b.isPosInf()) return Value::posInf();
    if (a.isInt() && b.isInt()) return Value::ofInt(a.asInt() + b.asInt());
    return Value::ofRat(a.asRat() + b.asRat());
  }

  int compare(const Value& a, const Value& b) const override {
    requireCarrier(a);
    requireCarrier(b);
    if (a.isNegInf()) return b.isNegInf() ? 0 : -1;
    if (b.isNegInf()) return 1;
    if (a.isPosInf()) return b.isPosInf() ? 0 : 1;
    if (b.isPosInf()) return -1;
    return ratCompare(a, b);
  }
};

class PsetRing : public Semiring {
 public:
  explicit PsetRing(SymbolSet universe)
      : Semiring(psetName(universe), Value::ofSet({}), Value::ofSet(universe),
                 false, false, true, true),
        universe_(std::move(universe)) {}

  static std::string psetName(const SymbolSet& u) {
    std::string n = "pset:";
    bool first = true;
    for (const auto& s : u) {
      if (!first) n += ',';
      n += s;
      first = false;
    }
    return n;
  }

  bool contains(const Value& v) const override {
    if (!v.isSet()) return false;
    for (const auto& s : v.asSet())
      if (!universe_.count(s)) return false;
    return true;
  }

  Value add(const Value& a, const Value& b) const override {  // union
    requireCarrier(a);
    requireCarrier(b);
    SymbolSet r = a.asSet();
    r.insert(b.asSet().begin(), b.asSet().end());
    return Value::ofSet(std::move(r));
  }

  Value mul(const Value& a, const Value& b) const override {  // intersection
    requireCarrier(a);
    requireCarrier(b);
    SymbolSet r;
    for (const auto& s : a.asSet())
      if (b.asSet().count(s)) r.insert(s);
    return Value::ofSet(std::move(r));
  }

  // The paper leaves 2^A unordered; we order by cardinality with ties broken
  // lexicographically on the sorted element sequence.
  int compare(const Value& a, const Value& b) const override {
    requireCarrier(a);
    requireCarrier(b);
    const SymbolSet& x = a.asSet();
    const SymbolSet& y = b.asSet();
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    if (x < y) return -1;
    if (y < x) return 1;
    return 0;
  }

 private:
  SymbolSet universe_;
};

const NumericRing kBool("bool", NumericRing::Domain::Boolean);
const NumericRing kNat("nat", NumericRing::Domain::Nat);
const NumericRing kInt("int", NumericRing::Domain::Integer);
const NumericRing kRat("rat", NumericRing::Domain::Rational);
const NatInfRing kNatInf;
const MaxTropRing kMaxTrop;

}  // namespace

const Semiring* lookupSemiring(const std::string& spec) {
  if (spec == "bool") return &kBool;
  if (spec == "nat") return &kNat;
  if (spec == "int") return &kInt;
  if (spec == "rat") return &kRat;
  if (spec == "nat-inf") return &kNatInf;
  if (spec == "maxtrop") return &kMaxTrop;
  if (spec.rfind("pset:", 0) == 0) {
    SymbolSet universe;
    std::string rest = spec.substr(5);
    std::string cur;
    for (char c : rest + ",") {
      if (c == ',') {
        if (!cur.empty()) universe.insert(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        cur += c;
      }
    }
    if (universe.empty()) return nullptr;
    static std::mutex mu;
    static std::map<SymbolSet, std::unique_ptr<PsetRing>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(universe);
    if (it == cache.end())
      it = cache.emplace(universe, std::make_unique<PsetRing>(universe)).first;
    return it->second.get();
  }
  return nullptr;
}

std::optional<Value> parseValueLiteral(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  if (text.empty()) return std::nullopt;
  if (text == "inf") return Value::posInf();
  if (text == "-inf") return Value::negInf();
  if (text.front() == '{') {
    if (text.back() != '}') return std::nullopt;
    SymbolSet syms;
    std::string inner = text.substr(1, text.size() - 2);
    std::string cur;
    for (char c : inner + ",") {
      if (c == ',') {
        if (!cur.empty()) syms.insert(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    return Value::ofSet(std::move(syms));
  }
  // integer or rational p/q
  auto isNum = [](const std::string& s) {
    if (s.empty()) return false;
    size_t i = s[0] == '-' ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!isNum(text)) return std::nullopt;
    return Value::ofInt(Int(text));
  }
  std::string p = text.substr(0, slash);
  std::string q = text.substr(slash + 1);
  if (!isNum(p) || !isNum(q)) return std::nullopt;
  Int den(q);
  if (den == 0) return std::nullopt;
  return Value::ofRat(Rat(Int(p), den));
}

}  // namespace acsolve

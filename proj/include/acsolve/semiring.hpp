#ifndef ACSOLVE_SEMIRING_HPP
#define ACSOLVE_SEMIRING_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acsolve/value.hpp"

namespace acsolve {

enum class CmpOp { Gt, Ge, Eq, Le, Lt, NotGt, NotGe, Ne, NotLe, NotLt };

const char* cmpToken(CmpOp op);
std::optional<CmpOp> cmpFromToken(const std::string& tok);

// An ordered semiring (R, +, *, zero, one, >) with exact arithmetic over a
// tagged-value carrier. Instances are immutable singletons; adding a new
// semiring means adding one subclass and one registry entry.
class Semiring {
 public:
  virtual ~Semiring() = default;

  const std::string& name() const { return name_; }
  const Value& zero() const { return zero_; }
  const Value& one() const { return one_; }
  bool hasAddInverse() const { return hasAddInv_; }
  bool hasMulInverse() const { return hasMulInv_; }
  bool mulCommutative() const { return mulComm_; }
  bool addIdempotent() const { return addIdem_; }

  virtual bool contains(const Value& v) const = 0;
  // Canonical in-carrier form, or nullopt if v is outside the carrier.
  virtual std::optional<Value> coerce(const Value& v) const;

  virtual Value add(const Value& a, const Value& b) const = 0;
  virtual Value mul(const Value& a, const Value& b) const = 0;
  virtual Value neg(const Value& a) const;
  // Multiplicative inverse; inv(zero) = zero (the e+^-1 -> e+ convention).
  virtual Value inv(const Value& a) const;

  // Strict total order on the carrier: negative, 0 or positive.
  virtual int compare(const Value& a, const Value& b) const = 0;

  bool cmpSatisfied(const Value& lhs, CmpOp op, const Value& rhs) const;

  Value parseValue(const std::string& text) const;
  std::string printValue(const Value& v) const { return v.str(); }

 protected:
  Semiring(std::string name, Value zero, Value one, bool addInv, bool mulInv,
           bool mulComm, bool addIdem)
      : name_(std::move(name)),
        zero_(std::move(zero)),
        one_(std::move(one)),
        hasAddInv_(addInv),
        hasMulInv_(mulInv),
        mulComm_(mulComm),
        addIdem_(addIdem) {}

  void requireCarrier(const Value& v) const;

 private:
  std::string name_;
  Value zero_, one_;
  bool hasAddInv_, hasMulInv_, mulComm_, addIdem_;
};

enum class RingOp { Add, Mul };

Value combine(const Semiring& s, RingOp op, const Value& a, const Value& b);
Value invert(const Semiring& s, RingOp op, const Value& a);
// -1, 0 or 1 under the ring's total order.
int compareValues(const Semiring& s, const Value& a, const Value& b);

// Resolves "nat", "rat", "maxtrop", "bool", "int", "nat-inf" and
// "pset:a,b,c". Returns nullptr for unknown names. Powerset rings are
// cached per universe; all returned pointers stay valid for the process
// lifetime and are safe to share across threads.
const Semiring* lookupSemiring(const std::string& spec);

// Parses a value literal without a target ring (used for bare literals in
// program text); the ring-specific form is Semiring::parseValue.
std::optional<Value> parseValueLiteral(const std::string& text);

}  // namespace acsolve

#endif

#pragma once

// Sorted term DAG for the quantifier-free BV/FP fragment.

#include "omtbits/bitvec.h"
#include "omtbits/error.h"
#include "omtbits/fp.h"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace omtbits {

class Sort {
 public:
  enum class Kind { Bool, BitVec, Float };

  static Sort boolean() { return Sort(Kind::Bool, 1, 0); }
  static Sort bitvec(unsigned width) { return Sort(Kind::BitVec, BvSort(width).width, 0); }
  static Sort floating(FpSort s) { return Sort(Kind::Float, s.ebits, s.sbits); }

  Kind kind() const { return kind_; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_bv() const { return kind_ == Kind::BitVec; }
  bool is_fp() const { return kind_ == Kind::Float; }
  /// Number of bits in the blasted representation.
  unsigned width() const { return kind_ == Kind::Float ? a_ + b_ : a_; }
  FpSort fp_sort() const;

  std::string to_string() const;
  friend bool operator==(const Sort&, const Sort&) = default;

 private:
  Sort(Kind k, unsigned a, unsigned b) : kind_(k), a_(a), b_(b) {}
  Kind kind_;
  unsigned a_;  // width or ebits
  unsigned b_;  // sbits
};

enum class Op {
  Var, True, False, BvConst, FpConst,
  Not, And, Or, Xor, Implies, Ite, Eq,
  Concat, Extract, BvNot, BvAnd, BvOr, BvXor, BvXnor, BvNeg, BvAdd, BvSub,
  BvMul, BvShl, BvLshr, BvUlt, BvUle, BvUgt, BvUge, BvSlt, BvSle, BvSgt, BvSge,
  FpFromBv, FpEq, FpLt, FpLeq, FpGt, FpGeq, FpIsNaN, FpIsInfinite, FpIsZero,
  FpIsNormal, FpIsSubnormal, FpIsNegative, FpIsPositive, FpNeg, FpAbs, FpMin,
  FpMax,
};

/// SMT-LIB spelling of an operator ("bvadd", "fp.leq", ...).
const char* op_name(Op op);
/// Reverse lookup of `op_name` for function applications; nullopt if unknown.
std::optional<Op> op_from_name(const std::string& name);

struct Term;
using TermRef = std::shared_ptr<const Term>;

struct Term {
  Op op;
  Sort sort;
  std::vector<TermRef> args;
  std::vector<unsigned> indices;  // extract hi lo
  std::string name;               // Var
  Bits bits;                      // BvConst / FpConst, MSB-first
  SourceLoc loc;
};

TermRef mk_var(const std::string& name, Sort sort);
TermRef mk_bool(bool value);
TermRef mk_bv(const BvConst& c);
TermRef mk_fp(const FpBits& c);
/// Builds a well-sorted application. Throws SortError naming the offending
/// expression otherwise.
TermRef mk_app(Op op, std::vector<TermRef> args,
               std::vector<unsigned> indices = {}, SourceLoc loc = {});

std::string to_smt2(const TermRef& t);
/// `name` as an SMT-LIB symbol, wrapped in |...| when it is not simple.
std::string quote_symbol(const std::string& name);
/// Structural equality, ignoring source locations.
bool same_term(const TermRef& a, const TermRef& b);

/// Full assignment: variable name -> MSB-first bits (one bit for Bool).
using Assignment = std::map<std::string, Bits>;

/// Reference semantics, computed directly from the definitions in bitvec
/// and fp (no circuits). Bool results are one bit.
Bits evaluate(const TermRef& t, const Assignment& env);
bool evaluate_bool(const TermRef& t, const Assignment& env);

/// Variables occurring in `t`, in first-occurrence order.
void collect_vars(const TermRef& t, std::vector<std::pair<std::string, Sort>>& out);

struct Objective {
  std::string name;
  Sort sort = Sort::boolean();
  Direction dir = Direction::Minimize;
  Signedness sign = Signedness::Unsigned;  // BV objectives only
};

/// Declarations, assertions and at most one objective.
struct Problem {
  std::vector<std::pair<std::string, Sort>> declarations;
  std::vector<TermRef> assertions;
  std::optional<Objective> objective;
};

}  // namespace omtbits

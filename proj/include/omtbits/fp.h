#pragma once

// IEEE 754 bit-level semantics for (_ FloatingPoint ebits sbits).
// A pattern has n = ebits + sbits bits laid out MSB-first:
//   bits[0]            sign
//   bits[1..ebits]     biased exponent
//   bits[ebits+1..n)   fraction (sbits - 1 bits, hidden bit implicit)
// Values are exact dyadic rationals; no host floating point is involved.

#include "omtbits/bitvec.h"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace omtbits {

using Rational = boost::multiprecision::cpp_rational;

struct FpSort {
  unsigned ebits = 2;
  unsigned sbits = 2;

  FpSort(unsigned e, unsigned s);
  unsigned width() const { return ebits + sbits; }
  unsigned fraction_bits() const { return sbits - 1; }
  friend bool operator==(const FpSort&, const FpSort&) = default;
};

std::string to_string(const FpSort& s);

class FpBits {
 public:
  FpBits(FpSort sort, Bits bits);
  FpBits(FpSort sort, const Bits& sign, const Bits& exponent,
         const Bits& fraction);

  const FpSort& sort() const { return sort_; }
  const Bits& bits() const { return bits_; }
  bool bit(unsigned i) const { return bits_.at(i) != 0; }
  bool sign() const { return bits_[0] != 0; }
  bool exponent_all_ones() const;
  bool exponent_all_zeros() const;
  bool fraction_zero() const;

  friend bool operator==(const FpBits&, const FpBits&) = default;

 private:
  FpSort sort_;
  Bits bits_;
};

enum class FpClass { NaN, PosInf, NegInf, PosZero, NegZero, Normal, Subnormal };

const char* to_string(FpClass c);

/// Special(NaN / +oo / -oo) or a finite exact value. Zeros are finite and
/// keep their sign in `negative`.
struct FpValue {
  enum class Kind { NaN, PosInf, NegInf, Finite };
  Kind kind = Kind::NaN;
  Rational value = 0;
  bool negative = false;

  bool is_nan() const { return kind == Kind::NaN; }
  bool is_finite() const { return kind == Kind::Finite; }
  /// "NaN", "+oo", "-oo", "-0", "0", "29/2", "-3/4".
  std::string to_string() const;
};

FpClass fp_classify(const FpBits& x);
FpValue fp_value(const FpBits& x);

// SMT-LIB comparison predicates: any NaN operand makes them false, and
// -0 compares equal to +0. All throw SortError on sort mismatch.
bool fp_leq(const FpBits& a, const FpBits& b);
bool fp_lt(const FpBits& a, const FpBits& b);
bool fp_geq(const FpBits& a, const FpBits& b);
bool fp_gt(const FpBits& a, const FpBits& b);
bool fp_eq(const FpBits& a, const FpBits& b);

FpBits fp_pos_inf(FpSort s);
FpBits fp_neg_inf(FpSort s);
FpBits fp_pos_zero(FpSort s);
FpBits fp_neg_zero(FpSort s);
/// Sign 0, exponent all ones, fraction 10...0.
FpBits canonical_nan(FpSort s);

// Rank of a non-NaN pattern in the strict total order
//   -oo < ... < -min_subnormal < -0 < +0 < +min_subnormal < ... < +oo.
// fp_lt(a, b) implies rank(a) < rank(b); the only tie broken by rank alone
// is -0 < +0.
BigInt fp_rank_count(FpSort s);
BigInt fp_rank(const FpBits& x);
FpBits fp_unrank(FpSort s, const BigInt& rank);

/// The k most-significant decided bits of an objective (tau_k).
struct PrefixAssignment {
  unsigned width = 0;
  Bits decided;

  explicit PrefixAssignment(unsigned w, Bits d = {});
  unsigned size() const { return static_cast<unsigned>(decided.size()); }
  PrefixAssignment restriction(unsigned k) const;
  PrefixAssignment extended(bool bit) const;
};

/// Extremal non-NaN completion of `basis` for the optimization direction.
struct DynamicAttractor {
  FpBits pattern;
  PrefixAssignment basis;
};

/// -oo when minimizing, +oo when maximizing; empty basis.
DynamicAttractor initial_dynamic_attractor(FpSort sort, Direction dir);

/// The fp_leq-least (Minimize) or fp_leq-greatest (Maximize) non-NaN pattern
/// extending `tau`. An empty `tau` yields the initial attractor. Throws Error
/// if every completion of `tau` is a NaN.
DynamicAttractor update_dynamic_attractor(FpSort sort,
                                          const PrefixAssignment& tau,
                                          Direction dir);

struct TrajectoryRecord {
  unsigned bit = 0;         // k
  bool target = false;      // dattr(tau_k)[k]
  bool satisfiable = false; // outcome of phi_noNaN /\ tau_k /\ (cost[k] = target)
  bool solver_called = false;
  Bits attractor;           // dattr(tau_k), or the static attractor
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
};

}  // namespace omtbits

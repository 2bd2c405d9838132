#pragma once

// Bit-vector sorts and constants. Every bit sequence in this library is
// stored MSB-first: bits[0] is the most significant bit (the sign bit for
// signed and floating-point sorts), bits[width - 1] the least significant.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace omtbits {

using BigInt = boost::multiprecision::cpp_int;
using Bits = std::vector<std::uint8_t>;

struct BvSort {
  unsigned width = 1;

  explicit BvSort(unsigned w);
  friend bool operator==(const BvSort&, const BvSort&) = default;
};

enum class Signedness { Unsigned, Signed };
enum class Direction { Minimize, Maximize };

const char* to_string(Signedness s);
const char* to_string(Direction d);

class BvConst {
 public:
  explicit BvConst(Bits bits);
  BvConst(BvSort sort, Bits bits);

  /// Two's-complement wraparound of `value` into `sort`.
  static BvConst from_value(BvSort sort, const BigInt& value);

  BvSort sort() const { return BvSort(width()); }
  unsigned width() const { return static_cast<unsigned>(bits_.size()); }
  const Bits& bits() const { return bits_; }
  bool bit(unsigned i) const { return bits_.at(i) != 0; }

  friend bool operator==(const BvConst&, const BvConst&) = default;

 private:
  Bits bits_;
};

/// One attractor equality: cost[index] = value.
struct BitTarget {
  unsigned index = 0;
  bool value = false;
  friend bool operator==(const BitTarget&, const BitTarget&) = default;
};

struct AttractorEqualities {
  BvConst attractor;
  std::vector<BitTarget> equalities;  // MSB to LSB, one per bit

  explicit AttractorEqualities(BvConst attr);
  unsigned width() const { return attractor.width(); }
};

/// Extremal value of the sort in the given direction: the static attractor.
BvConst bv_attractor(BvSort sort, Signedness sign, Direction dir);

BigInt bv_value(const BvConst& c, Signedness sign);

/// True iff `a` satisfies the first attractor equality on which `a` and `b`
/// disagree. Throws SortError on width mismatch.
bool lex_better(const BvConst& a, const BvConst& b,
                const AttractorEqualities& eqs);

/// Per-bit targets that reduce optimizing `cost` (of sort `cost_sort`) to
/// lexicographically maximizing agreement with `attr`, i.e. maximizing the
/// unsigned value of (cost nxor attr). `attr` must already be the attractor
/// for `dir`; the formula itself is never rewritten.
AttractorEqualities xor_objective(BvSort cost_sort, const BvConst& attr,
                                  Direction dir);

/// Agreement score sum 2^(n-1-k) * (x[k] nxor attr[k]).
BigInt agreement_score(const BvConst& x, const BvConst& attr);

/// Parses `#b0101` or `#x1C`. Throws Error on malformed input.
BvConst parse_bv_literal(std::string_view text);
std::string format_bv_literal(const Bits& bits);

/// Unsigned value of an MSB-first bit range.
BigInt bits_to_unsigned(const Bits& bits, std::size_t begin, std::size_t end);
Bits unsigned_to_bits(const BigInt& value, unsigned width);

}  // namespace omtbits

#include "omtbits/fp.h"

#include "omtbits/error.h"

#include <algorithm>
#include <sstream>

namespace omtbits {

FpSort::FpSort(unsigned e, unsigned s) : ebits(e), sbits(s) {
  if (e < 2 || s < 2)
    throw SortError("floating-point sort needs ebits >= 2 and sbits >= 2, got (" +
                    std::to_string(e) + ", " + std::to_string(s) + ")");
}

std::string to_string(const FpSort& s) {
  return "(_ FloatingPoint " + std::to_string(s.ebits) + " " +
         std::to_string(s.sbits) + ")";
}

FpBits::FpBits(FpSort sort, Bits bits) : sort_(sort), bits_(std::move(bits)) {
  if (bits_.size() != sort_.width())
    throw SortError("pattern has " + std::to_string(bits_.size()) +
                    " bits, " + to_string(sort_) + " expects " +
                    std::to_string(sort_.width()));
  for (auto& b : bits_) b = b ? 1 : 0;
}

namespace {

Bits join(const Bits& a, const Bits& b, const Bits& c) {
  Bits out(a);
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace

FpBits::FpBits(FpSort sort, const Bits& sign, const Bits& exponent,
               const Bits& fraction)
    : FpBits(sort, join(sign, exponent, fraction)) {
  if (sign.size() != 1 || exponent.size() != sort.ebits ||
      fraction.size() != sort.fraction_bits())
    throw SortError("fp triple widths (" + std::to_string(sign.size()) + ", " +
                    std::to_string(exponent.size()) + ", " +
                    std::to_string(fraction.size()) + ") do not match " +
                    to_string(sort));
}

bool FpBits::exponent_all_ones() const {
  return std::all_of(bits_.begin() + 1, bits_.begin() + 1 + sort_.ebits,
                     [](auto b) { return b != 0; });
}

bool FpBits::exponent_all_zeros() const {
  return std::none_of(bits_.begin() + 1, bits_.begin() + 1 + sort_.ebits,
                      [](auto b) { return b != 0; });
}

bool FpBits::fraction_zero() const {
  return std::none_of(bits_.begin() + 1 + sort_.ebits, bits_.end(),
                      [](auto b) { return b != 0; });
}

const char* to_string(FpClass c) {
  switch (c) {
    case FpClass::NaN: return "NaN";
    case FpClass::PosInf: return "+oo";
    case FpClass::NegInf: return "-oo";
    case FpClass::PosZero: return "+zero";
    case FpClass::NegZero: return "-zero";
    case FpClass::Normal: return "normal";
    case FpClass::Subnormal: return "subnormal";
  }
  return "?";
}

std::string FpValue::to_string() const {
  switch (kind) {
    case Kind::NaN: return "NaN";
    case Kind::PosInf: return "+oo";
    case Kind::NegInf: return "-oo";
    case Kind::Finite: break;
  }
  if (value == 0) return negative ? "-0" : "0";
  std::ostringstream os;
  os << value;
  return os.str();
}

FpClass fp_classify(const FpBits& x) {
  if (x.exponent_all_ones()) {
    if (!x.fraction_zero()) return FpClass::NaN;
    return x.sign() ? FpClass::NegInf : FpClass::PosInf;
  }
  if (x.exponent_all_zeros()) {
    if (x.fraction_zero()) return x.sign() ? FpClass::NegZero : FpClass::PosZero;
    return FpClass::Subnormal;
  }
  return FpClass::Normal;
}

FpValue fp_value(const FpBits& x) {
  FpValue v;
  v.negative = x.sign();
  switch (fp_classify(x)) {
    case FpClass::NaN: v.kind = FpValue::Kind::NaN; return v;
    case FpClass::PosInf: v.kind = FpValue::Kind::PosInf; return v;
    case FpClass::NegInf: v.kind = FpValue::Kind::NegInf; return v;
    default: break;
  }
  v.kind = FpValue::Kind::Finite;
  const FpSort& s = x.sort();
  const unsigned fbits = s.fraction_bits();
  const BigInt fraction = bits_to_unsigned(x.bits(), 1 + s.ebits, s.width());
  const long bias = (1L << (s.ebits - 1)) - 1;
  BigInt exponent_field = bits_to_unsigned(x.bits(), 1, 1 + s.ebits);
  long exponent;
  BigInt significand;  // scaled by 2^fbits
  if (exponent_field == 0) {
    exponent = 1 - bias;
    significand = fraction;
  } else {
    exponent = exponent_field.convert_to<long>() - bias;
    significand = (BigInt(1) << fbits) + fraction;
  }
  const long shift = exponent - static_cast<long>(fbits);
  Rational r = significand;
  if (shift >= 0)
    r *= Rational(BigInt(1) << shift);
  else
    r /= Rational(BigInt(1) << -shift);
  v.value = x.sign() ? Rational(-r) : r;
  return v;
}

namespace {

void require_same_sort(const FpBits& a, const FpBits& b) {
  if (!(a.sort() == b.sort()))
    throw SortError("fp comparison between " + to_string(a.sort()) + " and " +
                    to_string(b.sort()));
}

// -1, 0, 1 for ordered operands; nullopt if either is NaN.
std::optional<int> fp_compare(const FpBits& a, const FpBits& b) {
  require_same_sort(a, b);
  const FpValue va = fp_value(a), vb = fp_value(b);
  if (va.is_nan() || vb.is_nan()) return std::nullopt;
  auto key = [](const FpValue& v) {
    switch (v.kind) {
      case FpValue::Kind::NegInf: return -1;
      case FpValue::Kind::PosInf: return 1;
      default: return 0;
    }
  };
  const int ka = key(va), kb = key(vb);
  if (ka != kb) return ka < kb ? -1 : 1;
  if (ka != 0) return 0;
  if (va.value == vb.value) return 0;
  return va.value < vb.value ? -1 : 1;
}

}  // namespace

bool fp_leq(const FpBits& a, const FpBits& b) {
  auto c = fp_compare(a, b);
  return c && *c <= 0;
}
bool fp_lt(const FpBits& a, const FpBits& b) {
  auto c = fp_compare(a, b);
  return c && *c < 0;
}
bool fp_geq(const FpBits& a, const FpBits& b) { return fp_leq(b, a); }
bool fp_gt(const FpBits& a, const FpBits& b) { return fp_lt(b, a); }
bool fp_eq(const FpBits& a, const FpBits& b) {
  auto c = fp_compare(a, b);
  return c && *c == 0;
}

namespace {

FpBits make_pattern(FpSort s, bool sign, bool exponent_ones, bool fraction_msb) {
  Bits bits(s.width(), 0);
  bits[0] = sign;
  if (exponent_ones)
    std::fill(bits.begin() + 1, bits.begin() + 1 + s.ebits, 1);
  if (fraction_msb) bits[1 + s.ebits] = 1;
  return FpBits(s, std::move(bits));
}

}  // namespace

FpBits fp_pos_inf(FpSort s) { return make_pattern(s, false, true, false); }
FpBits fp_neg_inf(FpSort s) { return make_pattern(s, true, true, false); }
FpBits fp_pos_zero(FpSort s) { return make_pattern(s, false, false, false); }
FpBits fp_neg_zero(FpSort s) { return make_pattern(s, true, false, false); }
FpBits canonical_nan(FpSort s) { return make_pattern(s, false, true, true); }

namespace {

// Number of non-NaN magnitudes: every code up to and including infinity.
BigInt magnitude_count(FpSort s) {
  return ((BigInt(1) << s.ebits) - 1) * (BigInt(1) << s.fraction_bits()) + 1;
}

}  // namespace

BigInt fp_rank_count(FpSort s) { return 2 * magnitude_count(s); }

BigInt fp_rank(const FpBits& x) {
  if (fp_classify(x) == FpClass::NaN)
    throw Error("fp_rank: NaN has no rank");
  const BigInt magnitude = bits_to_unsigned(x.bits(), 1, x.sort().width());
  const BigInt m = magnitude_count(x.sort());
  return x.sign() ? BigInt(m - 1 - magnitude) : BigInt(m + magnitude);
}

FpBits fp_unrank(FpSort s, const BigInt& rank) {
  const BigInt m = magnitude_count(s);
  if (rank < 0 || rank >= 2 * m) throw Error("fp_unrank: rank out of range");
  const bool negative = rank < m;
  const BigInt magnitude = negative ? BigInt(m - 1 - rank) : BigInt(rank - m);
  Bits bits = unsigned_to_bits(magnitude, s.width() - 1);
  bits.insert(bits.begin(), negative ? 1 : 0);
  return FpBits(s, std::move(bits));
}

PrefixAssignment::PrefixAssignment(unsigned w, Bits d)
    : width(w), decided(std::move(d)) {
  if (decided.size() > width) throw Error("prefix longer than objective");
}

PrefixAssignment PrefixAssignment::restriction(unsigned k) const {
  if (k > size()) throw Error("restriction beyond decided prefix");
  return PrefixAssignment(width, Bits(decided.begin(), decided.begin() + k));
}

PrefixAssignment PrefixAssignment::extended(bool bit) const {
  Bits d = decided;
  d.push_back(bit);
  return PrefixAssignment(width, std::move(d));
}

DynamicAttractor initial_dynamic_attractor(FpSort sort, Direction dir) {
  return {dir == Direction::Minimize ? fp_neg_inf(sort) : fp_pos_inf(sort),
          PrefixAssignment(sort.width())};
}

DynamicAttractor update_dynamic_attractor(FpSort sort,
                                          const PrefixAssignment& tau,
                                          Direction dir) {
  if (tau.width != sort.width()) throw Error("prefix width does not match sort");
  if (tau.decided.empty()) return initial_dynamic_attractor(sort, dir);

  const unsigned k = tau.size();
  const bool negative = tau.decided[0] != 0;
  // Minimizing a positive (or maximizing a negative) value pulls the
  // magnitude toward zero; the other side pulls it toward infinity.
  const bool shrink = negative == (dir == Direction::Maximize);

  Bits bits = tau.decided;
  bits.resize(sort.width(), 0);
  if (!shrink) {
    bool decided_exp_zero = false;
    for (unsigned i = 1; i < std::min(k, 1 + sort.ebits); ++i)
      decided_exp_zero |= tau.decided[i] == 0;
    if (decided_exp_zero) {
      std::fill(bits.begin() + k, bits.end(), 1);
    } else {
      // Only the infinity extension is left on this side.
      for (unsigned i = k; i < 1 + sort.ebits; ++i) bits[i] = 1;
    }
  }
  FpBits pattern(sort, std::move(bits));
  if (fp_classify(pattern) == FpClass::NaN)
    throw Error("update_dynamic_attractor: prefix admits only NaN completions");
  return {std::move(pattern), tau};
}

}  // namespace omtbits

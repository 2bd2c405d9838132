#include "omtbits/bitvec.h"

#include "omtbits/error.h"

#include <cctype>

namespace omtbits {

BvSort::BvSort(unsigned w) : width(w) {
  if (w == 0) throw SortError("bit-vector width must be positive");
}

const char* to_string(Signedness s) {
  return s == Signedness::Signed ? "signed" : "unsigned";
}

const char* to_string(Direction d) {
  return d == Direction::Minimize ? "minimize" : "maximize";
}

BvConst::BvConst(Bits bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw SortError("bit-vector constant must be non-empty");
  for (auto& b : bits_) b = b ? 1 : 0;
}

BvConst::BvConst(BvSort sort, Bits bits) : BvConst(std::move(bits)) {
  if (bits_.size() != sort.width)
    throw SortError("constant has " + std::to_string(bits_.size()) +
                    " bits, sort expects " + std::to_string(sort.width));
}

BvConst BvConst::from_value(BvSort sort, const BigInt& value) {
  BigInt modulus = BigInt(1) << sort.width;
  BigInt v = value % modulus;
  if (v < 0) v += modulus;
  return BvConst(sort, unsigned_to_bits(v, sort.width));
}

AttractorEqualities::AttractorEqualities(BvConst attr)
    : attractor(std::move(attr)) {
  equalities.reserve(attractor.width());
  for (unsigned k = 0; k < attractor.width(); ++k)
    equalities.push_back({k, attractor.bit(k)});
}

BvConst bv_attractor(BvSort sort, Signedness sign, Direction dir) {
  const bool maximize = dir == Direction::Maximize;
  Bits bits(sort.width, maximize ? 1 : 0);
  // Two's complement puts the negative weight on the MSB, so its extremal
  // value is the complement of the unsigned one in bit 0 only.
  if (sign == Signedness::Signed) bits[0] = maximize ? 0 : 1;
  return BvConst(sort, std::move(bits));
}

BigInt bits_to_unsigned(const Bits& bits, std::size_t begin, std::size_t end) {
  BigInt v = 0;
  for (std::size_t i = begin; i < end; ++i) {
    v <<= 1;
    if (bits[i]) v |= 1;
  }
  return v;
}

Bits unsigned_to_bits(const BigInt& value, unsigned width) {
  Bits bits(width, 0);
  BigInt v = value;
  for (unsigned i = width; i-- > 0;) {
    bits[i] = static_cast<std::uint8_t>(bit_test(v, 0) ? 1 : 0);
    v >>= 1;
  }
  return bits;
}

BigInt bv_value(const BvConst& c, Signedness sign) {
  BigInt v = bits_to_unsigned(c.bits(), 0, c.width());
  if (sign == Signedness::Signed && c.bit(0)) v -= BigInt(1) << c.width();
  return v;
}

namespace {

void require_same_width(unsigned a, unsigned b, const char* what) {
  if (a != b)
    throw SortError(std::string(what) + ": width mismatch (" +
                    std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

bool lex_better(const BvConst& a, const BvConst& b,
                const AttractorEqualities& eqs) {
  require_same_width(a.width(), b.width(), "lex_better");
  require_same_width(a.width(), eqs.width(), "lex_better");
  for (const auto& eq : eqs.equalities) {
    const bool a_sat = a.bit(eq.index) == eq.value;
    const bool b_sat = b.bit(eq.index) == eq.value;
    if (a_sat != b_sat) return a_sat;
  }
  return false;
}

AttractorEqualities xor_objective(BvSort cost_sort, const BvConst& attr,
                                  Direction /*dir*/) {
  require_same_width(cost_sort.width, attr.width(), "xor_objective");
  // Minimizing cost xor attr and maximizing cost nxor attr pick the same
  // bit targets; the direction is already folded into attr.
  return AttractorEqualities(attr);
}

BigInt agreement_score(const BvConst& x, const BvConst& attr) {
  require_same_width(x.width(), attr.width(), "agreement_score");
  BigInt v = 0;
  for (unsigned k = 0; k < x.width(); ++k) {
    v <<= 1;
    if (x.bit(k) == attr.bit(k)) v |= 1;
  }
  return v;
}

BvConst parse_bv_literal(std::string_view text) {
  if (text.size() < 3 || text[0] != '#')
    throw Error("malformed bit-vector literal '" + std::string(text) + "'");
  Bits bits;
  if (text[1] == 'b') {
    for (char ch : text.substr(2)) {
      if (ch != '0' && ch != '1')
        throw Error("bad binary digit in '" + std::string(text) + "'");
      bits.push_back(ch == '1');
    }
  } else if (text[1] == 'x') {
    for (char ch : text.substr(2)) {
      if (!std::isxdigit(static_cast<unsigned char>(ch)))
        throw Error("bad hex digit in '" + std::string(text) + "'");
      const int d = std::isdigit(static_cast<unsigned char>(ch))
                        ? ch - '0'
                        : std::tolower(static_cast<unsigned char>(ch)) - 'a' + 10;
      for (int s = 3; s >= 0; --s) bits.push_back((d >> s) & 1);
    }
  } else {
    throw Error("malformed bit-vector literal '" + std::string(text) + "'");
  }
  return BvConst(std::move(bits));
}

std::string format_bv_literal(const Bits& bits) {
  std::string s = "#b";
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace omtbits

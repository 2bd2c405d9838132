#pragma once

#include <doctest.h>

#include "omtbits/bitblast.h"
#include "omtbits/bitvec.h"
#include "omtbits/engines.h"
#include "omtbits/fp.h"
#include "omtbits/oracle.h"
#include "omtbits/sat.h"
#include "omtbits/smtlib.h"
#include "omtbits/term.h"

#include <optional>
#include <string>
#include <string_view>

namespace th {

using namespace omtbits;

/// "0 110 1101" -> {0,1,1,0,1,1,0,1}; spaces are ignored.
inline Bits B(std::string_view s) {
  Bits out;
  for (char c : s)
    if (c == '0' || c == '1') out.push_back(static_cast<std::uint8_t>(c - '0'));
  return out;
}

inline FpBits F(unsigned e, unsigned s, std::string_view bits) {
  return FpBits(FpSort(e, s), B(bits));
}

inline Problem problem_from(const std::string& text) { return problem_of(parse_script(text)); }

inline const char* kFig2 =
    "(declare-const cost (_ FloatingPoint 3 5))\n"
    "(assert (fp.geq cost (fp #b0 #b110 #b1101)))\n"
    "(minimize cost)\n"
    "(check-sat)\n";

/// Exact order key of a non-NaN float: -oo/+oo at the ends, otherwise the
/// rational value. Zeros compare equal.
struct ExactKey {
  int tier;  // -1 for -oo, 0 finite, 1 for +oo
  Rational value;
  bool operator<(const ExactKey& o) const {
    if (tier != o.tier) return tier < o.tier;
    return value < o.value;
  }
  bool operator==(const ExactKey& o) const { return tier == o.tier && value == o.value; }
};

inline ExactKey exact_key(const FpBits& x) {
  const FpValue v = fp_value(x);
  if (v.kind == FpValue::Kind::NegInf) return {-1, 0};
  if (v.kind == FpValue::Kind::PosInf) return {1, 0};
  return {0, v.value};
}

/// Optimum computed by enumerating every assignment of every declared
/// variable through the term evaluator; no SAT solving is involved.
struct EnumResult {
  OptStatus status = OptStatus::Unsat;
  std::optional<Bits> best;
};

inline EnumResult enumerate_optimum(const Problem& p) {
  const Objective& obj = *p.objective;
  unsigned total = 0;
  for (const auto& d : p.declarations) total += d.second.width();
  REQUIRE(total <= 18);
  EnumResult r;
  bool nan_seen = false;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << total); ++code) {
    Assignment env;
    unsigned pos = 0;
    for (const auto& [name, sort] : p.declarations) {
      Bits b(sort.width());
      for (auto& x : b) x = static_cast<std::uint8_t>((code >> pos++) & 1);
      env[name] = b;
    }
    bool ok = true;
    for (const auto& a : p.assertions) ok = ok && evaluate_bool(a, env);
    if (!ok) continue;
    const Bits& c = env.at(obj.name);
    bool better = false;
    if (obj.sort.is_fp()) {
      const FpBits x(obj.sort.fp_sort(), c);
      if (fp_classify(x) == FpClass::NaN) {
        nan_seen = true;
        continue;
      }
      if (!r.best) {
        better = true;
      } else {
        const ExactKey a = exact_key(x), b = exact_key(FpBits(obj.sort.fp_sort(), *r.best));
        better = obj.dir == Direction::Minimize ? a < b : b < a;
      }
    } else {
      if (!r.best) {
        better = true;
      } else {
        const BigInt a = bv_value(BvConst(c), obj.sign), b = bv_value(BvConst(*r.best), obj.sign);
        better = obj.dir == Direction::Minimize ? a < b : a > b;
      }
    }
    if (better) r.best = c;
  }
  r.status = r.best ? OptStatus::Optimum : nan_seen ? OptStatus::NanOnly : OptStatus::Unsat;
  return r;
}

inline bool same_value(const Objective& obj, const Bits& a, const Bits& b) {
  if (!obj.sort.is_fp()) return bv_value(BvConst(a), obj.sign) == bv_value(BvConst(b), obj.sign);
  const FpBits x(obj.sort.fp_sort(), a), y(obj.sort.fp_sort(), b);
  const bool nx = fp_classify(x) == FpClass::NaN, ny = fp_classify(y) == FpClass::NaN;
  if (nx || ny) return nx && ny;
  return exact_key(x) == exact_key(y);
}

}  // namespace th

#include "omtbits/bitblast.h"

#include <algorithm>

namespace omtbits {

const BlastedVar* BlastMap::find(const std::string& name) const {
  auto it = vars_.find(name);
  return it == vars_.end() ? nullptr : &it->second;
}

const BlastedVar& BlastMap::at(const std::string& name) const {
  if (const auto* v = find(name)) return *v;
  throw Error("unknown variable '" + name + "'");
}

Lit assume_literal_for_bit(const BlastMap& map, const std::string& var,
                           unsigned bit, bool value) {
  const BlastedVar& v = map.at(var);
  if (bit >= v.bits.size())
    throw Error("bit index " + std::to_string(bit) + " out of range for '" +
                var + "' of width " + std::to_string(v.bits.size()));
  return value ? v.bits[bit] : ~v.bits[bit];
}

Blaster::Blaster(sat::Solver& solver) : solver_(solver) {
  true_ = fresh();
  add({true_});
}

const LitVec& Blaster::declare(const std::string& name, Sort sort) {
  if (const auto* v = map_.find(name)) {
    if (!(v->sort == sort))
      throw SortError("variable '" + name + "' redeclared with sort " +
                      sort.to_string());
    return v->bits;
  }
  BlastedVar v{sort, {}};
  for (unsigned i = 0; i < sort.width(); ++i) v.bits.push_back(fresh());
  return map_.vars_.emplace(name, std::move(v)).first->second.bits;
}

LitVec Blaster::constant_bits(const Bits& bits) const {
  LitVec out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(constant(b != 0));
  return out;
}

namespace {

std::uint64_t pair_key(Lit a, Lit b) {
  auto lo = static_cast<std::uint32_t>(std::min(a.code(), b.code()));
  auto hi = static_cast<std::uint32_t>(std::max(a.code(), b.code()));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace

Lit Blaster::mk_and(Lit a, Lit b) {
  if (a == false_lit() || b == false_lit() || a == ~b) return false_lit();
  if (a == true_lit()) return b;
  if (b == true_lit() || a == b) return a;
  const auto key = pair_key(a, b);
  if (auto it = and_cache_.find(key); it != and_cache_.end()) return it->second;
  const Lit g = fresh();
  add({~g, a});
  add({~g, b});
  add({g, ~a, ~b});
  and_cache_.emplace(key, g);
  return g;
}

Lit Blaster::mk_xor(Lit a, Lit b) {
  bool flip = false;
  if (a.negated()) { a = ~a; flip = !flip; }
  if (b.negated()) { b = ~b; flip = !flip; }
  Lit r;
  if (a == true_lit()) {
    r = ~b;
  } else if (b == true_lit()) {
    r = ~a;
  } else if (a == b) {
    r = false_lit();
  } else {
    const auto key = pair_key(a, b);
    if (auto it = xor_cache_.find(key); it != xor_cache_.end()) {
      r = it->second;
    } else {
      r = fresh();
      add({~r, a, b});
      add({~r, ~a, ~b});
      add({r, ~a, b});
      add({r, a, ~b});
      xor_cache_.emplace(key, r);
    }
  }
  return flip ? ~r : r;
}

Lit Blaster::mk_ite(Lit c, Lit t, Lit e) {
  if (c == true_lit() || t == e) return t;
  if (c == false_lit()) return e;
  if (t == ~e) return mk_xor(c, e);
  if (t == true_lit()) return mk_or(c, e);
  if (t == false_lit()) return mk_and(~c, e);
  if (e == true_lit()) return mk_or(~c, t);
  if (e == false_lit()) return mk_and(c, t);
  const Lit g = fresh();
  add({~c, ~t, g});
  add({~c, t, ~g});
  add({c, ~e, g});
  add({c, e, ~g});
  add({~t, ~e, g});
  add({t, e, ~g});
  return g;
}

Lit Blaster::mk_and(std::span<const Lit> xs) {
  Lit r = true_lit();
  for (Lit x : xs) r = mk_and(r, x);
  return r;
}

Lit Blaster::mk_or(std::span<const Lit> xs) {
  Lit r = false_lit();
  for (Lit x : xs) r = mk_or(r, x);
  return r;
}

Lit Blaster::equal(std::span<const Lit> a, std::span<const Lit> b) {
  if (a.size() != b.size()) throw SortError("equal: width mismatch");
  Lit r = true_lit();
  for (std::size_t i = 0; i < a.size(); ++i) r = mk_and(r, mk_iff(a[i], b[i]));
  return r;
}

Lit Blaster::ult(std::span<const Lit> a, std::span<const Lit> b) {
  if (a.size() != b.size()) throw SortError("ult: width mismatch");
  // From LSB to MSB: the most significant differing bit decides.
  Lit lt = false_lit();
  for (std::size_t i = a.size(); i-- > 0;)
    lt = mk_ite(mk_xor(a[i], b[i]), b[i], lt);
  return lt;
}

Lit Blaster::slt(std::span<const Lit> a, std::span<const Lit> b) {
  LitVec fa(a.begin(), a.end()), fb(b.begin(), b.end());
  fa[0] = ~fa[0];
  fb[0] = ~fb[0];
  return ult(fa, fb);
}

namespace {

struct FpFields {
  std::span<const Lit> exponent;
  std::span<const Lit> fraction;
  std::span<const Lit> magnitude;
};

FpFields fields(std::span<const Lit> x, FpSort s) {
  if (x.size() != s.width()) throw SortError("fp circuit: width mismatch");
  return {x.subspan(1, s.ebits), x.subspan(1 + s.ebits), x.subspan(1)};
}

LitVec negated(std::span<const Lit> xs) {
  LitVec out;
  for (Lit x : xs) out.push_back(~x);
  return out;
}

}  // namespace

Lit Blaster::fp_is_nan(std::span<const Lit> x, FpSort s) {
  const auto f = fields(x, s);
  return mk_and(mk_and(f.exponent), ~mk_and(negated(f.fraction)));
}

Lit Blaster::fp_is_inf(std::span<const Lit> x, FpSort s) {
  const auto f = fields(x, s);
  return mk_and(mk_and(f.exponent), mk_and(negated(f.fraction)));
}

Lit Blaster::fp_is_zero(std::span<const Lit> x, FpSort s) {
  const auto f = fields(x, s);
  return mk_and(mk_and(negated(f.exponent)), mk_and(negated(f.fraction)));
}

Lit Blaster::fp_is_normal(std::span<const Lit> x, FpSort s) {
  const auto f = fields(x, s);
  return mk_and(~mk_and(f.exponent), ~mk_and(negated(f.exponent)));
}

Lit Blaster::fp_is_subnormal(std::span<const Lit> x, FpSort s) {
  const auto f = fields(x, s);
  return mk_and(mk_and(negated(f.exponent)), ~mk_and(negated(f.fraction)));
}

Lit Blaster::fp_rank_lt(std::span<const Lit> a, std::span<const Lit> b) {
  if (a.size() != b.size()) throw SortError("fp_rank_lt: width mismatch");
  const Lit sa = a[0], sb = b[0];
  const auto ma = a.subspan(1), mb = b.subspan(1);
  const Lit both_pos = mk_and(~sa, ~sb);
  const Lit both_neg = mk_and(sa, sb);
  const Lit terms[] = {mk_and(sa, ~sb), mk_and(both_pos, ult(ma, mb)),
                       mk_and(both_neg, ult(mb, ma))};
  return mk_or(terms);
}

Lit Blaster::fp_lt(std::span<const Lit> a, std::span<const Lit> b, FpSort s) {
  const Lit ordered = mk_and(~fp_is_nan(a, s), ~fp_is_nan(b, s));
  const Lit both_zero = mk_and(fp_is_zero(a, s), fp_is_zero(b, s));
  return mk_and(mk_and(ordered, ~both_zero), fp_rank_lt(a, b));
}

Lit Blaster::fp_eq(std::span<const Lit> a, std::span<const Lit> b, FpSort s) {
  const Lit ordered = mk_and(~fp_is_nan(a, s), ~fp_is_nan(b, s));
  const Lit both_zero = mk_and(fp_is_zero(a, s), fp_is_zero(b, s));
  return mk_and(ordered, mk_or(both_zero, equal(a, b)));
}

Lit Blaster::fp_leq(std::span<const Lit> a, std::span<const Lit> b, FpSort s) {
  return mk_or(fp_lt(a, b, s), fp_eq(a, b, s));
}

LitVec Blaster::fp_min_max(std::span<const Lit> a, std::span<const Lit> b,
                           FpSort s, bool is_min) {
  const Lit a_nan = fp_is_nan(a, s), b_nan = fp_is_nan(b, s);
  const Lit pick_b = is_min ? fp_lt(b, a, s) : fp_lt(a, b, s);
  const Lit both_zero = mk_and(fp_is_zero(a, s), fp_is_zero(b, s));
  // Between -0 and +0, min returns -0 and max returns +0.
  LitVec a_adj(a.begin(), a.end());
  a_adj[0] = is_min ? mk_or(a[0], mk_and(both_zero, b[0]))
                    : mk_and(a[0], mk_or(~both_zero, b[0]));
  LitVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = mk_ite(a_nan, b[i], mk_ite(b_nan, a[i], mk_ite(pick_b, b[i], a_adj[i])));
  return out;
}

LitVec Blaster::add_words(std::span<const Lit> a, std::span<const Lit> b,
                          Lit carry_in) {
  LitVec out(a.size());
  Lit carry = carry_in;
  for (std::size_t i = a.size(); i-- > 0;) {
    const Lit t = mk_xor(a[i], b[i]);
    out[i] = mk_xor(t, carry);
    carry = mk_or(mk_and(a[i], b[i]), mk_and(carry, t));
  }
  return out;
}

LitVec Blaster::mul_words(std::span<const Lit> a, std::span<const Lit> b) {
  const std::size_t n = a.size();
  LitVec acc(n, false_lit());
  for (std::size_t j = 0; j < n; ++j) {
    const Lit bj = b[n - 1 - j];
    if (bj == false_lit()) continue;
    LitVec partial(n, false_lit());
    for (std::size_t i = 0; i + j < n; ++i) partial[i] = mk_and(a[i + j], bj);
    acc = add_words(acc, partial, false_lit());
  }
  return acc;
}

LitVec Blaster::shift_words(std::span<const Lit> a, std::span<const Lit> amount,
                            bool left) {
  const std::size_t n = a.size();
  LitVec cur(a.begin(), a.end());
  LitVec overflow;
  for (std::size_t s = 0; s < n; ++s) {
    const Lit bit = amount[n - 1 - s];
    if (s >= 63 || (std::size_t{1} << s) >= n) {
      overflow.push_back(bit);
      continue;
    }
    const std::size_t amt = std::size_t{1} << s;
    LitVec next(n);
    for (std::size_t i = 0; i < n; ++i) {
      Lit shifted = false_lit();
      if (left && i + amt < n) shifted = cur[i + amt];
      if (!left && i >= amt) shifted = cur[i - amt];
      next[i] = mk_ite(bit, shifted, cur[i]);
    }
    cur = std::move(next);
  }
  if (!overflow.empty()) {
    const Lit any = mk_or(overflow);
    for (auto& l : cur) l = mk_and(~any, l);
  }
  return cur;
}

LitVec Blaster::bits(const TermRef& t) {
  if (auto it = cache_.find(t.get()); it != cache_.end()) return it->second;
  LitVec r = blast(*t);
  cache_.emplace(t.get(), r);
  keep_alive_.push_back(t);
  return r;
}

Lit Blaster::literal(const TermRef& t) {
  if (!t->sort.is_bool()) throw SortError("expected a Bool term: " + to_smt2(t));
  return bits(t)[0];
}

void Blaster::assert_formula(const TermRef& t) { add({literal(t)}); }

LitVec Blaster::blast(const Term& t) {
  const auto& a = t.args;
  auto one = [](Lit l) { return LitVec{l}; };
  auto bitwise = [&](auto&& f) {
    const LitVec x = bits(a[0]), y = bits(a[1]);
    LitVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = f(x[i], y[i]);
    return r;
  };
  auto fps = [&] { return a[0]->sort.fp_sort(); };

  switch (t.op) {
    case Op::Var: return declare(t.name, t.sort);
    case Op::True: return one(true_lit());
    case Op::False: return one(false_lit());
    case Op::BvConst:
    case Op::FpConst: return constant_bits(t.bits);
    case Op::Not: return one(~literal(a[0]));
    case Op::And:
    case Op::Or: {
      LitVec xs;
      for (const auto& x : a) xs.push_back(literal(x));
      return one(t.op == Op::And ? mk_and(xs) : mk_or(xs));
    }
    case Op::Xor: return one(mk_xor(literal(a[0]), literal(a[1])));
    case Op::Implies: return one(mk_or(~literal(a[0]), literal(a[1])));
    case Op::Ite: {
      const Lit c = literal(a[0]);
      const LitVec x = bits(a[1]), y = bits(a[2]);
      LitVec r(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) r[i] = mk_ite(c, x[i], y[i]);
      return r;
    }
    case Op::Eq: return one(equal(bits(a[0]), bits(a[1])));
    case Op::Concat: {
      LitVec r = bits(a[0]);
      const LitVec lo = bits(a[1]);
      r.insert(r.end(), lo.begin(), lo.end());
      return r;
    }
    case Op::Extract: {
      const LitVec x = bits(a[0]);
      const std::size_t n = x.size();
      return LitVec(x.begin() + (n - 1 - t.indices[0]), x.begin() + (n - t.indices[1]));
    }
    case Op::BvNot: return negated(bits(a[0]));
    case Op::BvAnd: return bitwise([&](Lit x, Lit y) { return mk_and(x, y); });
    case Op::BvOr: return bitwise([&](Lit x, Lit y) { return mk_or(x, y); });
    case Op::BvXor: return bitwise([&](Lit x, Lit y) { return mk_xor(x, y); });
    case Op::BvXnor: return bitwise([&](Lit x, Lit y) { return mk_iff(x, y); });
    case Op::BvNeg: {
      const LitVec x = bits(a[0]);
      return add_words(negated(x), LitVec(x.size(), false_lit()), true_lit());
    }
    case Op::BvAdd: return add_words(bits(a[0]), bits(a[1]), false_lit());
    case Op::BvSub: return add_words(bits(a[0]), negated(bits(a[1])), true_lit());
    case Op::BvMul: return mul_words(bits(a[0]), bits(a[1]));
    case Op::BvShl: return shift_words(bits(a[0]), bits(a[1]), true);
    case Op::BvLshr: return shift_words(bits(a[0]), bits(a[1]), false);
    case Op::BvUlt: return one(ult(bits(a[0]), bits(a[1])));
    case Op::BvUle: return one(ule(bits(a[0]), bits(a[1])));
    case Op::BvUgt: return one(ult(bits(a[1]), bits(a[0])));
    case Op::BvUge: return one(ule(bits(a[1]), bits(a[0])));
    case Op::BvSlt: return one(slt(bits(a[0]), bits(a[1])));
    case Op::BvSle: return one(sle(bits(a[0]), bits(a[1])));
    case Op::BvSgt: return one(slt(bits(a[1]), bits(a[0])));
    case Op::BvSge: return one(sle(bits(a[1]), bits(a[0])));
    case Op::FpFromBv: {
      LitVec r = bits(a[0]);
      for (int i = 1; i < 3; ++i) {
        const LitVec x = bits(a[i]);
        r.insert(r.end(), x.begin(), x.end());
      }
      return r;
    }
    case Op::FpEq: return one(fp_eq(bits(a[0]), bits(a[1]), fps()));
    case Op::FpLt: return one(fp_lt(bits(a[0]), bits(a[1]), fps()));
    case Op::FpLeq: return one(fp_leq(bits(a[0]), bits(a[1]), fps()));
    case Op::FpGt: return one(fp_lt(bits(a[1]), bits(a[0]), fps()));
    case Op::FpGeq: return one(fp_leq(bits(a[1]), bits(a[0]), fps()));
    case Op::FpIsNaN: return one(fp_is_nan(bits(a[0]), fps()));
    case Op::FpIsInfinite: return one(fp_is_inf(bits(a[0]), fps()));
    case Op::FpIsZero: return one(fp_is_zero(bits(a[0]), fps()));
    case Op::FpIsNormal: return one(fp_is_normal(bits(a[0]), fps()));
    case Op::FpIsSubnormal: return one(fp_is_subnormal(bits(a[0]), fps()));
    case Op::FpIsNegative: {
      const LitVec x = bits(a[0]);
      return one(mk_and(x[0], ~fp_is_nan(x, fps())));
    }
    case Op::FpIsPositive: {
      const LitVec x = bits(a[0]);
      return one(mk_and(~x[0], ~fp_is_nan(x, fps())));
    }
    case Op::FpNeg: {
      LitVec x = bits(a[0]);
      x[0] = ~x[0];
      return x;
    }
    case Op::FpAbs: {
      LitVec x = bits(a[0]);
      x[0] = false_lit();
      return x;
    }
    case Op::FpMin:
    case Op::FpMax:
      return fp_min_max(bits(a[0]), bits(a[1]), fps(), t.op == Op::FpMin);
  }
  throw UnsupportedError(std::string("bit-blasting not supported for '") +
                         op_name(t.op) + "' at " + std::to_string(t.loc.line) +
                         ":" + std::to_string(t.loc.column));
}

void load_problem(const Problem& problem, Blaster& blaster) {
  for (const auto& [name, sort] : problem.declarations) blaster.declare(name, sort);
  if (problem.objective)
    blaster.declare(problem.objective->name, problem.objective->sort);
  for (const auto& a : problem.assertions) blaster.assert_formula(a);
}

}  // namespace omtbits

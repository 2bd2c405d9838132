#include "helpers.h"

#include <doctest.h>

#include <random>

using namespace omtbits;
using th::B;

namespace {

LitVec assume_bits(const LitVec& lits, const Bits& value) {
  LitVec out;
  for (std::size_t i = 0; i < lits.size(); ++i) out.push_back(value[i] ? lits[i] : ~lits[i]);
  return out;
}

// Checks that for every assignment of `vars`, the blasted formula is
// satisfiable under the assignment exactly when the evaluator says true.
// Returns the number of satisfying assignments.
unsigned pointwise_check(const TermRef& formula,
                         const std::vector<std::pair<std::string, Sort>>& vars) {
  sat::Solver solver;
  Blaster b(solver);
  for (const auto& [n, s] : vars) b.declare(n, s);
  const Lit f = b.literal(formula);
  unsigned total = 0;
  for (const auto& v : vars) total += v.second.width();
  unsigned count = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << total); ++code) {
    Assignment env;
    LitVec assumptions{f};
    unsigned pos = 0;
    for (const auto& [n, s] : vars) {
      Bits bits(s.width());
      for (auto& x : bits) x = static_cast<std::uint8_t>((code >> pos++) & 1);
      const LitVec a = assume_bits(b.map().at(n).bits, bits);
      assumptions.insert(assumptions.end(), a.begin(), a.end());
      env[n] = bits;
    }
    const bool expected = evaluate_bool(formula, env);
    const bool got = solver.solve(assumptions) == sat::Status::Sat;
    CHECK(got == expected);
    if (got != expected) MESSAGE(to_smt2(formula));
    count += expected;
  }
  return count;
}

class RandomTerms {
 public:
  RandomTerms(unsigned seed, std::vector<TermRef> bv_vars, std::vector<TermRef> fp_vars)
      : rng_(seed), bv_(std::move(bv_vars)), fp_(std::move(fp_vars)) {}

  std::uint32_t pick(std::uint32_t n) { return rng_() % n; }

  Bits random_bits(unsigned w) {
    Bits b(w);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng_() & 1);
    return b;
  }

  TermRef bv_term(unsigned depth) {
    const unsigned w = bv_[0]->sort.width();
    if (depth == 0 || pick(4) == 0)
      return pick(3) ? bv_[pick(bv_.size())] : mk_bv(BvConst(random_bits(w)));
    static const Op bin[] = {Op::BvAnd, Op::BvOr, Op::BvXor, Op::BvXnor, Op::BvAdd,
                             Op::BvSub, Op::BvMul, Op::BvShl, Op::BvLshr};
    switch (pick(5)) {
      case 0: return mk_app(pick(2) ? Op::BvNot : Op::BvNeg, {bv_term(depth - 1)});
      case 1: return mk_app(Op::Ite, {formula(depth - 1), bv_term(depth - 1), bv_term(depth - 1)});
      case 2: {
        if (w < 2) return bv_term(depth - 1);
        const TermRef hi = mk_app(Op::Extract, {bv_term(depth - 1)}, {w - 1, 1});
        const TermRef lo = mk_app(Op::Extract, {bv_term(depth - 1)}, {0, 0});
        return mk_app(Op::Concat, {hi, lo});
      }
      default: return mk_app(bin[pick(9)], {bv_term(depth - 1), bv_term(depth - 1)});
    }
  }

  TermRef fp_term(unsigned depth) {
    const FpSort s = fp_[0]->sort.fp_sort();
    if (depth == 0 || pick(3) == 0)
      return pick(3) ? fp_[pick(fp_.size())] : mk_fp(FpBits(s, random_bits(s.width())));
    switch (pick(5)) {
      case 0: return mk_app(Op::FpNeg, {fp_term(depth - 1)});
      case 1: return mk_app(Op::FpAbs, {fp_term(depth - 1)});
      case 2: return mk_app(Op::FpMin, {fp_term(depth - 1), fp_term(depth - 1)});
      case 3: return mk_app(Op::FpMax, {fp_term(depth - 1), fp_term(depth - 1)});
      default: return mk_app(Op::Ite, {formula(depth - 1), fp_term(depth - 1), fp_term(depth - 1)});
    }
  }

  TermRef atom(unsigned depth) {
    static const Op bv_cmp[] = {Op::Eq, Op::BvUlt, Op::BvUle, Op::BvUgt, Op::BvUge,
                                Op::BvSlt, Op::BvSle, Op::BvSgt, Op::BvSge};
    static const Op fp_cmp[] = {Op::Eq, Op::FpEq, Op::FpLt, Op::FpLeq, Op::FpGt, Op::FpGeq};
    static const Op fp_pred[] = {Op::FpIsNaN, Op::FpIsInfinite, Op::FpIsZero, Op::FpIsNormal,
                                 Op::FpIsSubnormal, Op::FpIsNegative, Op::FpIsPositive};
    const bool use_fp = !fp_.empty() && (bv_.empty() || pick(2));
    if (!use_fp) return mk_app(bv_cmp[pick(9)], {bv_term(depth), bv_term(depth)});
    if (pick(3) == 0) return mk_app(fp_pred[pick(7)], {fp_term(depth)});
    return mk_app(fp_cmp[pick(6)], {fp_term(depth), fp_term(depth)});
  }

  TermRef formula(unsigned depth) {
    if (depth == 0 || pick(2) == 0) return atom(depth == 0 ? 0 : depth - 1);
    switch (pick(5)) {
      case 0: return mk_app(Op::Not, {formula(depth - 1)});
      case 1: return mk_app(Op::And, {formula(depth - 1), formula(depth - 1)});
      case 2: return mk_app(Op::Or, {formula(depth - 1), formula(depth - 1)});
      case 3: return mk_app(Op::Xor, {formula(depth - 1), formula(depth - 1)});
      default: return mk_app(Op::Implies, {formula(depth - 1), formula(depth - 1)});
    }
  }

 private:
  std::mt19937 rng_;
  std::vector<TermRef> bv_, fp_;
};

}  // namespace

TEST_CASE("x + y = 0 over 2 bits has exactly the 4 wrapping pairs") {
  const TermRef x = mk_var("x", Sort::bitvec(2)), y = mk_var("y", Sort::bitvec(2));
  const TermRef f = mk_app(Op::Eq, {mk_app(Op::BvAdd, {x, y}), mk_bv(BvConst(B("00")))});
  CHECK(pointwise_check(f, {{"x", x->sort}, {"y", y->sort}}) == 4);
}

TEST_CASE("nothing lies below minus infinity") {
  const FpSort s(3, 5);
  const TermRef c = mk_var("c", Sort::floating(s));
  const TermRef f = mk_app(Op::FpLeq, {c, mk_fp(fp_neg_inf(s))});
  sat::Solver solver;
  Blaster b(solver);
  b.assert_formula(f);
  const LitVec bits = b.map().at("c").bits;
  std::vector<Bits> models;
  for (unsigned code = 0; code < 256; ++code) {
    const Bits p = unsigned_to_bits(BigInt(code), 8);
    if (solver.solve(assume_bits(bits, p)) == sat::Status::Sat) models.push_back(p);
  }
  REQUIRE(models.size() == 1);
  CHECK(models[0] == B("1 111 0000"));
}

TEST_CASE("isNaN has 30 models in (3,5)") {
  const TermRef c = mk_var("c", Sort::floating(FpSort(3, 5)));
  CHECK(pointwise_check(mk_app(Op::FpIsNaN, {c}), {{"c", c->sort}}) == 30);
}

TEST_CASE("objective bit literals") {
  sat::Solver solver;
  Blaster b(solver);
  const LitVec& bits = b.declare("cost", Sort::floating(FpSort(3, 5)));
  CHECK(assume_literal_for_bit(b.map(), "cost", 0, true) == bits[0]);
  CHECK(assume_literal_for_bit(b.map(), "cost", 3, false) == ~bits[3]);
  CHECK_THROWS_AS(assume_literal_for_bit(b.map(), "cost", 8, true), Error);
  CHECK_THROWS_AS(assume_literal_for_bit(b.map(), "nope", 0, true), Error);
  CHECK(solver.solve({assume_literal_for_bit(b.map(), "cost", 2, true),
                      assume_literal_for_bit(b.map(), "cost", 2, false)}) ==
        sat::Status::Unsat);
  CHECK(b.declare("cost", Sort::floating(FpSort(3, 5))) == bits);
  CHECK_THROWS_AS(b.declare("cost", Sort::bitvec(8)), Error);
}

TEST_CASE("fp predicate circuits match fp-core on every (3,5) pair") {
  const FpSort s(3, 5);
  sat::Solver solver;
  Blaster b(solver);
  const LitVec x = b.declare("x", Sort::floating(s));
  const LitVec y = b.declare("y", Sort::floating(s));
  const Lit lt = b.fp_lt(x, y, s), leq = b.fp_leq(x, y, s), eq = b.fp_eq(x, y, s);
  const Lit nan = b.fp_is_nan(x, s), inf = b.fp_is_inf(x, s), zero = b.fp_is_zero(x, s);
  const Lit normal = b.fp_is_normal(x, s), sub = b.fp_is_subnormal(x, s);
  const Lit rank_lt = b.fp_rank_lt(x, y);
  for (unsigned i = 0; i < 256; ++i) {
    const Bits bx = unsigned_to_bits(BigInt(i), 8);
    const FpBits fx(s, bx);
    const FpClass cls = fp_classify(fx);
    for (unsigned j = 0; j < 256; ++j) {
      const Bits by = unsigned_to_bits(BigInt(j), 8);
      const FpBits fy(s, by);
      LitVec a = assume_bits(x, bx);
      const LitVec ay = assume_bits(y, by);
      a.insert(a.end(), ay.begin(), ay.end());
      REQUIRE(solver.solve(a) == sat::Status::Sat);
      CHECK(solver.model_value(lt) == fp_lt(fx, fy));
      CHECK(solver.model_value(leq) == fp_leq(fx, fy));
      CHECK(solver.model_value(eq) == fp_eq(fx, fy));
      if (cls != FpClass::NaN && fp_classify(fy) != FpClass::NaN)
        CHECK(solver.model_value(rank_lt) == (fp_rank(fx) < fp_rank(fy)));
      if (j == 0) {
        CHECK(solver.model_value(nan) == (cls == FpClass::NaN));
        CHECK(solver.model_value(inf) == (cls == FpClass::PosInf || cls == FpClass::NegInf));
        CHECK(solver.model_value(zero) == (cls == FpClass::PosZero || cls == FpClass::NegZero));
        CHECK(solver.model_value(normal) == (cls == FpClass::Normal));
        CHECK(solver.model_value(sub) == (cls == FpClass::Subnormal));
      }
    }
  }
}

TEST_CASE("random bit-vector formulas are blasted faithfully") {
  for (unsigned seed = 0; seed < 150; ++seed) {
    const unsigned w = 2 + seed % 4;  // widths 2..5, two variables
    const TermRef x = mk_var("x", Sort::bitvec(w)), y = mk_var("y", Sort::bitvec(w));
    RandomTerms gen(seed, {x, y}, {});
    const TermRef f = gen.formula(3);
    pointwise_check(f, {{"x", x->sort}, {"y", y->sort}});
  }
}

TEST_CASE("random floating-point formulas are blasted faithfully") {
  for (unsigned seed = 0; seed < 120; ++seed) {
    const bool small = seed % 2 == 0;
    const FpSort s = small ? FpSort(2, 3) : FpSort(3, 5);
    std::vector<TermRef> vars = {mk_var("a", Sort::floating(s))};
    if (small) vars.push_back(mk_var("b", Sort::floating(s)));
    RandomTerms gen(1000 + seed, {}, vars);
    const TermRef f = gen.formula(3);
    std::vector<std::pair<std::string, Sort>> decl;
    for (const auto& v : vars) decl.emplace_back(v->name, v->sort);
    pointwise_check(f, decl);
  }
}

TEST_CASE("fp built from bit-vector pieces") {
  const TermRef s = mk_var("s", Sort::bitvec(1)), e = mk_var("e", Sort::bitvec(2));
  const TermRef m = mk_var("m", Sort::bitvec(2));
  const TermRef f = mk_app(Op::FpIsNormal, {mk_app(Op::FpFromBv, {s, e, m})});
  // exponent 01 or 10: 2 * 2 * 4 = 16 normal patterns of (2,3).
  CHECK(pointwise_check(f, {{"s", s->sort}, {"e", e->sort}, {"m", m->sort}}) == 16);
}

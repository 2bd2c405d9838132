#include "helpers.h"

#include <doctest.h>

using namespace omtbits;
using th::B;

namespace {

TermRef bv(const char* bits) { return mk_bv(BvConst(B(bits))); }
TermRef fpc(const char* bits) { return mk_fp(th::F(3, 5, bits)); }
Bits ev(const TermRef& t, const Assignment& env = {}) { return evaluate(t, env); }

}  // namespace

TEST_CASE("sort checking") {
  const TermRef x = mk_var("x", Sort::bitvec(4));
  const TermRef y = mk_var("y", Sort::bitvec(3));
  CHECK_THROWS_AS(mk_app(Op::BvAdd, {x, y}), SortError);
  try {
    mk_app(Op::BvAdd, {x, y});
  } catch (const SortError& e) {
    CHECK(std::string(e.what()).find("(bvadd x y)") != std::string::npos);
  }
  CHECK_THROWS_AS(mk_app(Op::Not, {x}), SortError);
  CHECK_THROWS_AS(mk_app(Op::Extract, {x}, {4, 0}), SortError);
  CHECK_THROWS_AS(mk_app(Op::Extract, {x}, {1, 2}), SortError);
  CHECK(mk_app(Op::Extract, {x}, {2, 1})->sort == Sort::bitvec(2));
  CHECK(mk_app(Op::Concat, {x, y})->sort == Sort::bitvec(7));
  CHECK(mk_app(Op::FpFromBv, {bv("0"), bv("110"), bv("1101")})->sort ==
        Sort::floating(FpSort(3, 5)));
  CHECK_THROWS_AS(mk_app(Op::FpFromBv, {bv("00"), bv("110"), bv("1101")}), SortError);
  CHECK_THROWS_AS(mk_app(Op::FpLt, {fpc("0 000 0000"), mk_fp(th::F(2, 3, "0 00 00"))}),
                  SortError);
  CHECK_THROWS_AS(mk_app(Op::Eq, {x, fpc("0 000 0000")}), SortError);
}

TEST_CASE("operator names round-trip") {
  for (int i = static_cast<int>(Op::Not); i <= static_cast<int>(Op::FpMax); ++i) {
    const Op op = static_cast<Op>(i);
    const auto back = op_from_name(op_name(op));
    REQUIRE(back.has_value());
    CHECK(*back == op);
  }
  CHECK_FALSE(op_from_name("fp.add").has_value());
}

TEST_CASE("bit-vector evaluation") {
  CHECK(ev(mk_app(Op::BvAdd, {bv("1111"), bv("0010")})) == B("0001"));
  CHECK(ev(mk_app(Op::BvSub, {bv("0001"), bv("0010")})) == B("1111"));
  CHECK(ev(mk_app(Op::BvMul, {bv("0011"), bv("0110")})) == B("0010"));
  CHECK(ev(mk_app(Op::BvNeg, {bv("0001")})) == B("1111"));
  CHECK(ev(mk_app(Op::BvShl, {bv("0011"), bv("0001")})) == B("0110"));
  CHECK(ev(mk_app(Op::BvShl, {bv("0011"), bv("0100")})) == B("0000"));
  CHECK(ev(mk_app(Op::BvLshr, {bv("1100"), bv("0011")})) == B("0001"));
  CHECK(ev(mk_app(Op::BvLshr, {bv("1100"), bv("1111")})) == B("0000"));
  CHECK(ev(mk_app(Op::BvXnor, {bv("1100"), bv("1010")})) == B("1001"));
  CHECK(ev(mk_app(Op::Extract, {bv("1100")}, {3, 2})) == B("11"));
  CHECK(ev(mk_app(Op::Extract, {bv("1100")}, {0, 0})) == B("0"));
  CHECK(ev(mk_app(Op::Concat, {bv("10"), bv("01")})) == B("1001"));
  CHECK(evaluate_bool(mk_app(Op::BvSlt, {bv("1000"), bv("0111")}), {}));
  CHECK_FALSE(evaluate_bool(mk_app(Op::BvUlt, {bv("1000"), bv("0111")}), {}));
}

TEST_CASE("floating-point evaluation") {
  const TermRef nz = fpc("1 000 0000"), pz = fpc("0 000 0000");
  CHECK(ev(mk_app(Op::FpMin, {nz, pz})) == B("1 000 0000"));
  CHECK(ev(mk_app(Op::FpMin, {pz, nz})) == B("1 000 0000"));
  CHECK(ev(mk_app(Op::FpMax, {nz, pz})) == B("0 000 0000"));
  CHECK(ev(mk_app(Op::FpMin, {fpc("0 111 1000"), fpc("0 001 0000")})) == B("0 001 0000"));
  CHECK(ev(mk_app(Op::FpMax, {fpc("0 001 0000"), fpc("1 111 1000")})) == B("0 001 0000"));
  CHECK(ev(mk_app(Op::FpNeg, {fpc("0 110 1101")})) == B("1 110 1101"));
  CHECK(ev(mk_app(Op::FpAbs, {fpc("1 110 1101")})) == B("0 110 1101"));
  CHECK(evaluate_bool(mk_app(Op::FpIsNegative, {nz}), {}));
  CHECK_FALSE(evaluate_bool(mk_app(Op::FpIsNegative, {fpc("1 111 1111")}), {}));
  CHECK_FALSE(evaluate_bool(mk_app(Op::FpIsPositive, {fpc("0 111 1111")}), {}));
  CHECK(evaluate_bool(mk_app(Op::FpIsZero, {nz}), {}));
  CHECK(evaluate_bool(mk_app(Op::FpIsInfinite, {fpc("1 111 0000")}), {}));
  CHECK(evaluate_bool(mk_app(Op::FpEq, {nz, pz}), {}));
  CHECK_FALSE(evaluate_bool(mk_app(Op::Eq, {nz, pz}), {}));
  CHECK(ev(mk_app(Op::FpFromBv, {bv("0"), bv("110"), bv("1101")})) == B("0 110 1101"));
}

TEST_CASE("variables, printing and structure") {
  const TermRef c = mk_var("cost", Sort::floating(FpSort(3, 5)));
  const TermRef t = mk_app(Op::FpGeq, {c, fpc("0 110 1101")});
  CHECK(to_smt2(t) == "(fp.geq cost (fp #b0 #b110 #b1101))");
  CHECK(evaluate_bool(t, {{"cost", B("0 110 1110")}}));
  CHECK_FALSE(evaluate_bool(t, {{"cost", B("0 110 1100")}}));
  CHECK_THROWS_AS(evaluate(t, {}), Error);
  CHECK(same_term(t, mk_app(Op::FpGeq, {mk_var("cost", Sort::floating(FpSort(3, 5))),
                                        fpc("0 110 1101")})));
  CHECK_FALSE(same_term(t, mk_app(Op::FpGt, {c, fpc("0 110 1101")})));
  const TermRef x = mk_var("x", Sort::bitvec(2)), y = mk_var("y", Sort::bitvec(2));
  std::vector<std::pair<std::string, Sort>> vars;
  collect_vars(mk_app(Op::And, {mk_app(Op::BvUlt, {y, x}), mk_app(Op::Eq, {x, y})}), vars);
  REQUIRE(vars.size() == 2);
  CHECK(vars[0].first == "y");
  CHECK(vars[1].first == "x");
  CHECK(to_smt2(mk_app(Op::Extract, {x}, {1, 0})) == "((_ extract 1 0) x)");
  CHECK(Sort::bitvec(4).to_string() == "(_ BitVec 4)");
  CHECK(Sort::boolean().to_string() == "Bool");
}

#include "helpers.h"

#include <doctest.h>

#include <algorithm>

using namespace omtbits;
using th::B;

namespace {

EngineConfig cfg(EngineKind e, bool bp = false, bool pi = false, bool so = false) {
  EngineConfig c;
  c.engine = e;
  c.enhancements = {bp, pi, so};
  return c;
}

std::string fp_script(const std::string& body, const char* dir = "minimize",
                      const char* sort = "(_ FloatingPoint 3 5)") {
  return std::string("(declare-const cost ") + sort + ")\n" + body + "(" + dir +
         " cost)\n(check-sat)\n";
}

std::vector<EngineConfig> valid_combinations(EngineKind e) {
  std::vector<EngineConfig> out;
  for (int m = 0; m < 8; ++m) {
    EngineConfig c = cfg(e, m & 1, m & 2, m & 4);
    if (c.enhancements.so && !c.enhancements.any()) continue;
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("NaN prechecks") {
  {
    OmtSession s(th::problem_from(fp_script("(assert false)\n")), cfg(EngineKind::OfpBs));
    CHECK(nan_prechecks(s) == PrecheckOutcome::Unsat);
  }
  {
    OmtSession s(th::problem_from(fp_script("(assert (fp.isNaN cost))\n")), cfg(EngineKind::OfpBs));
    CHECK(nan_prechecks(s) == PrecheckOutcome::NanOnly);
    CHECK(fp_classify(FpBits(FpSort(3, 5), s.cost_model())) == FpClass::NaN);
  }
  {
    OmtSession s(th::problem_from(th::kFig2), cfg(EngineKind::OfpBs));
    CHECK(nan_prechecks(s) == PrecheckOutcome::Proceed);
    // Afterwards NaN is excluded for good.
    const Lit nan = s.blaster().fp_is_nan(s.cost(), FpSort(3, 5));
    CHECK(s.check({nan}) == sat::Status::Unsat);
  }
}

TEST_CASE("ofp-bs reproduces the 29/2 trajectory") {
  const Problem p = th::problem_from(th::kFig2);
  const OptResult r = ofp_bs(p, cfg(EngineKind::OfpBs));
  REQUIRE(r.status == OptStatus::Optimum);
  CHECK(*r.optimum_bits == B("0 110 1101"));
  CHECK(r.value_string() == "29/2");
  CHECK(r.stats.smt_calls <= 10);
  REQUIRE(r.trajectory.records.size() == 8);
  const std::vector<std::string> attractors = {"-oo", "0", "2", "8", "8", "12", "14", "14"};
  const std::vector<bool> outcomes = {false, false, false, true, false, false, true, false};
  for (unsigned k = 0; k < 8; ++k) {
    const auto& rec = r.trajectory.records[k];
    CHECK(rec.bit == k);
    CHECK(fp_value(FpBits(FpSort(3, 5), rec.attractor)).to_string() == attractors[k]);
    CHECK(rec.satisfiable == outcomes[k]);
  }
  CHECK(r.model.at("cost") == B("0 110 1101"));
}

TEST_CASE("trajectory records are sound") {
  const auto instances = generate_instances(11, Sort::floating(FpSort(3, 5)), 40, "mixed");
  for (const auto& inst : instances) {
    const Problem p = th::problem_from(inst.text);
    const OptResult r = ofp_bs(p, cfg(EngineKind::OfpBs));
    if (r.status != OptStatus::Optimum) continue;
    for (const auto& rec : r.trajectory.records) {
      if (rec.satisfiable) continue;
      // phi, not NaN, the decided prefix and the attractor bit: unsatisfiable.
      sat::Solver solver;
      Blaster b(solver);
      load_problem(p, b);
      const LitVec cost = b.map().at("cost").bits;
      solver.add_clause({~b.fp_is_nan(cost, FpSort(3, 5))});
      LitVec a;
      for (unsigned i = 0; i < rec.bit; ++i) a.push_back((*r.optimum_bits)[i] ? cost[i] : ~cost[i]);
      a.push_back(rec.target ? cost[rec.bit] : ~cost[rec.bit]);
      CHECK(solver.solve(a) == sat::Status::Unsat);
      CHECK((*r.optimum_bits)[rec.bit] != rec.target);
    }
  }
}

TEST_CASE("ofp-bs edge cases") {
  {
    const OptResult r = ofp_bs(th::problem_from(fp_script("")), cfg(EngineKind::OfpBs));
    REQUIRE(r.status == OptStatus::Optimum);
    CHECK(*r.optimum_bits == B("1 111 0000"));
    CHECK(r.stats.smt_calls <= 10);
  }
  {
    const OptResult r =
        ofp_bs(th::problem_from(fp_script("", "maximize")), cfg(EngineKind::OfpBs));
    CHECK(*r.optimum_bits == B("0 111 0000"));
  }
  {
    const OptResult r =
        ofp_bs(th::problem_from(fp_script("(assert (fp.isNaN cost))\n")), cfg(EngineKind::OfpBs));
    CHECK(r.status == OptStatus::NanOnly);
    CHECK(r.value_string() == "NaN");
    CHECK(r.trajectory.records.empty());
  }
  {
    const OptResult r = ofp_bs(th::problem_from(fp_script("(assert false)\n")), cfg(EngineKind::OfpBs));
    CHECK(r.status == OptStatus::Unsat);
    CHECK(r.stats.smt_calls == 1);
    CHECK_FALSE(r.optimum_bits.has_value());
  }
  {
    // Both zeros feasible: either sign is a correct optimum.
    const OptResult r = ofp_bs(
        th::problem_from(fp_script("(assert (fp.isZero cost))\n", "maximize")),
        cfg(EngineKind::OfpBs));
    CHECK(fp_classify(FpBits(FpSort(3, 5), *r.optimum_bits)) == FpClass::PosZero);
  }
  CHECK_THROWS_AS(ofp_bs(th::problem_from("(declare-const c (_ BitVec 3))(minimize c)"),
                         cfg(EngineKind::OfpBs)),
                  Error);
}

TEST_CASE("obv-bs examples") {
  auto run = [](const char* text) {
    return obv_bs(th::problem_from(text), cfg(EngineKind::ObvBs));
  };
  {
    const OptResult r = run("(declare-const cost (_ BitVec 4))(assert (bvult cost #b1010))"
                            "(maximize cost)");
    CHECK(*r.optimum_bits == B("1001"));
    CHECK(*r.bv_optimum == 9);
  }
  {
    const OptResult r = run("(declare-const cost (_ BitVec 3))(assert (bvsge cost #b101))"
                            "(minimize cost :signed)");
    CHECK(*r.optimum_bits == B("101"));
    CHECK(*r.bv_optimum == -3);
  }
  {
    const OptResult r = run("(declare-const cost (_ BitVec 3))(minimize cost :signed)");
    CHECK(*r.optimum_bits == B("100"));
    CHECK(r.value_string() == "-4");
  }
  {
    const OptResult r = run("(declare-const cost (_ BitVec 3))(assert (= cost #b000))"
                            "(assert (= cost #b001))(minimize cost)");
    CHECK(r.status == OptStatus::Unsat);
  }
}

TEST_CASE("linear search examples") {
  {
    const OptResult r = omt_linear(th::problem_from(th::kFig2), cfg(EngineKind::OmtLinear));
    CHECK(r.value_string() == "29/2");
  }
  {
    const OptResult r = omt_linear(
        th::problem_from(fp_script("(assert (= cost (_ +zero 3 5)))\n")), cfg(EngineKind::OmtLinear));
    CHECK(*r.optimum_bits == B("0 000 0000"));
    CHECK(r.stats.iterations == 1);
    CHECK(r.stats.smt_calls == 2);
  }
  {
    // Start from a large value and walk down one model at a time.
    const Problem p = th::problem_from(
        "(declare-const cost (_ BitVec 6))(assert (bvugt cost #b000111))(minimize cost)");
    const OptResult r = omt_linear(p, cfg(EngineKind::OmtLinear));
    const auto e = th::enumerate_optimum(p);
    REQUIRE(e.best);
    CHECK(*r.optimum_bits == *e.best);
    CHECK(*r.bv_optimum == 8);
  }
}

TEST_CASE("binary search pivot") {
  CHECK(binary_pivot(0, 10, Rational(1, 2)) == 5);
  CHECK(binary_pivot(3, 4, Rational(1, 2)) == 3);
  CHECK(binary_pivot(0, 10, Rational(1, 4)) == 2);
  CHECK(binary_pivot(0, 10, Rational(9, 10)) == 9);

  // Midpoint between +0 and 31/2 in the enumerated order of all non-NaN
  // (3,5) patterns (-0 placed before +0).
  const FpSort s(3, 5);
  std::vector<FpBits> order;
  for (unsigned c = 0; c < 256; ++c) {
    FpBits x(s, unsigned_to_bits(BigInt(c), 8));
    if (fp_classify(x) != FpClass::NaN) order.push_back(x);
  }
  std::sort(order.begin(), order.end(), [](const FpBits& a, const FpBits& b) {
    const auto ka = th::exact_key(a), kb = th::exact_key(b);
    if (ka == kb) return a.sign() && !b.sign();
    return ka < kb;
  });
  auto index_of = [&](const FpBits& x) {
    return BigInt(std::find(order.begin(), order.end(), x) - order.begin());
  };
  const BigInt lb = index_of(fp_pos_zero(s));
  const BigInt ub = index_of(th::F(3, 5, "0 110 1111"));
  const BigInt pivot = binary_pivot(lb, ub, Rational(1, 2));
  CHECK(pivot == (lb + ub) / 2);
  CHECK(fp_rank(fp_pos_zero(s)) == lb);
  CHECK(fp_unrank(s, pivot) == order[static_cast<std::size_t>(pivot)]);
}

TEST_CASE("binary search examples") {
  {
    const OptResult r = omt_binary(th::problem_from(th::kFig2), cfg(EngineKind::OmtBinary));
    CHECK(r.value_string() == "29/2");
  }
  {
    const OptResult r = omt_binary(
        th::problem_from(fp_script("(assert (= cost (fp #b1 #b011 #b0110)))\n", "maximize")),
        cfg(EngineKind::OmtBinary));
    CHECK(*r.optimum_bits == B("1 011 0110"));
    // 226 non-NaN values: about log2(226) rounds.
    CHECK(r.stats.iterations <= 8 + 2);
  }
  for (Rational rho : {Rational(1, 4), Rational(3, 4), Rational(1, 100)}) {
    EngineConfig c = cfg(EngineKind::OmtBinary);
    c.rho = rho;
    const OptResult r = omt_binary(th::problem_from(th::kFig2), c);
    CHECK(r.value_string() == "29/2");
  }
}

TEST_CASE("configuration validation") {
  EngineConfig c = cfg(EngineKind::OmtBinary);
  c.rho = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.rho = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(cfg(EngineKind::OfpBs, false, false, true).validate(), Error);
  CHECK_NOTHROW(cfg(EngineKind::OfpBs, true, false, true).validate());
  CHECK_THROWS_AS(optimize(th::problem_from("(declare-const c (_ BitVec 3))"),
                           cfg(EngineKind::OmtLinear)),
                  Error);
  CHECK(parse_engine("omt-bin") == EngineKind::OmtBinary);
  CHECK_FALSE(parse_engine("z3").has_value());
}

TEST_CASE("safe bits") {
  Objective o{"cost", Sort::floating(FpSort(3, 5)), Direction::Minimize, Signedness::Unsigned};
  CHECK(safe_bits(o, PrefixAssignment(8)) == std::vector<unsigned>{0});
  // Positive while minimizing: every bit's direction is settled.
  CHECK(safe_bits(o, PrefixAssignment(8, B("0"))).size() == 8);
  // Negative while minimizing: fraction waits for a zero exponent bit.
  CHECK(safe_bits(o, PrefixAssignment(8, B("1"))) == std::vector<unsigned>{0, 1, 2, 3});
  CHECK(safe_bits(o, PrefixAssignment(8, B("110"))).size() == 8);
  o.dir = Direction::Maximize;
  CHECK(safe_bits(o, PrefixAssignment(8, B("1"))).size() == 8);
  Objective b{"cost", Sort::bitvec(5), Direction::Minimize, Signedness::Signed};
  CHECK(safe_bits(b, PrefixAssignment(5)).size() == 5);
}

TEST_CASE("enhancements") {
  const Problem p = th::problem_from(th::kFig2);
  const OptResult plain = ofp_bs(p, cfg(EngineKind::OfpBs));
  CHECK(plain.stats.hint_calls == 0);
  const OptResult pi = ofp_bs(p, cfg(EngineKind::OfpBs, false, true));
  CHECK(pi.value_string() == "29/2");
  CHECK(pi.stats.smt_calls <= plain.stats.smt_calls);
  CHECK(pi.stats.hint_calls > 0);
  for (EngineKind e : {EngineKind::OfpBs, EngineKind::OmtLinear, EngineKind::OmtBinary})
    for (const EngineConfig& c : valid_combinations(e))
      CHECK(optimize(p, c).value_string() == "29/2");
}

TEST_CASE("engines agree with exhaustive enumeration on random instances") {
  struct Suite {
    Sort sort;
    const char* profile;
    unsigned count;
    std::vector<EngineKind> engines;
  };
  const std::vector<Suite> suites = {
      {Sort::floating(FpSort(2, 3)), "mixed", 60,
       {EngineKind::OfpBs, EngineKind::OmtLinear, EngineKind::OmtBinary}},
      {Sort::floating(FpSort(2, 3)), "nan-heavy", 30,
       {EngineKind::OfpBs, EngineKind::OmtLinear, EngineKind::OmtBinary}},
      {Sort::floating(FpSort(3, 5)), "chain", 20,
       {EngineKind::OfpBs, EngineKind::OmtLinear, EngineKind::OmtBinary}},
      {Sort::bitvec(3), "mixed", 60,
       {EngineKind::ObvBs, EngineKind::OmtLinear, EngineKind::OmtBinary}},
      {Sort::bitvec(4), "chain", 30,
       {EngineKind::ObvBs, EngineKind::OmtLinear, EngineKind::OmtBinary}},
  };
  for (const auto& suite : suites) {
    for (const auto& inst : generate_instances(77, suite.sort, suite.count, suite.profile)) {
      const Problem p = th::problem_from(inst.text);
      unsigned bits = 0;
      for (const auto& d : p.declarations) bits += d.second.width();
      if (bits > 16) continue;
      const auto expected = th::enumerate_optimum(p);
      for (EngineKind e : suite.engines)
        for (const EngineConfig& c : valid_combinations(e)) {
          const OptResult r = optimize(p, c);
          CHECK_MESSAGE(r.status == expected.status, inst.name, " ", config_label(c));
          if (r.status != expected.status) continue;
          if (expected.status == OptStatus::Optimum)
            CHECK_MESSAGE(th::same_value(*p.objective, *r.optimum_bits, *expected.best), inst.name,
                          " ", config_label(c));
          if (expected.status == OptStatus::NanOnly)
            CHECK(fp_classify(FpBits(p.objective->sort.fp_sort(), *r.optimum_bits)) ==
                  FpClass::NaN);
          if (e == EngineKind::OfpBs || e == EngineKind::ObvBs)
            CHECK(r.stats.smt_calls <= p.objective->sort.width() + 2);
          if (r.status != OptStatus::Unsat) {
            bool ok = true;
            for (const auto& a : p.assertions) ok = ok && evaluate_bool(a, r.model);
            CHECK(ok);
            CHECK(r.model.at("cost") == *r.optimum_bits);
          }
        }
    }
  }
}

TEST_CASE("an exhausted deadline reports a partial result") {
  // 24-bit factoring keeps the solver busy well past a zero deadline.
  const Problem p = th::problem_from(
      "(declare-const x (_ BitVec 24))(declare-const y (_ BitVec 24))"
      "(declare-const cost (_ BitVec 24))"
      "(assert (= (bvmul x y) #xC3A5F1))(assert (bvugt x #x000001))(assert (bvugt y #x000001))"
      "(assert (= cost x))(minimize cost)");
  for (EngineKind e : {EngineKind::ObvBs, EngineKind::OmtLinear, EngineKind::OmtBinary}) {
    EngineConfig c = cfg(e);
    c.timeout = std::chrono::milliseconds(0);
    const OptResult r = optimize(p, c);
    CHECK(r.partial);
    CHECK((r.status == OptStatus::Unknown || r.status == OptStatus::Optimum));
  }
}

#include "helpers.h"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace omtbits;
using th::B;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string run(const std::string& text, EngineKind engine = EngineKind::OfpBs,
                bool stats = false) {
  InterpretOptions opts;
  opts.config.engine = engine;
  opts.stats = stats;
  std::ostringstream os;
  interpret(parse_script(text), opts, os);
  return os.str();
}

void check_round_trip(const std::string& text) {
  const Script a = parse_script(text);
  const std::string printed = print_script(a);
  const Script b = parse_script(printed);
  CHECK_MESSAGE(same_script(a, b), printed);
  CHECK(print_script(b) == printed);
}

const std::filesystem::path kData = OMTBITS_TEST_DATA;

}  // namespace

TEST_CASE("s-expression reader") {
  const auto es = read_sexprs("(a :k 12 #b01 #xF \"s\"\"q\" |x y|) ; comment\n()");
  REQUIRE(es.size() == 2);
  REQUIRE(es[0].items.size() == 7);
  CHECK(es[0].items[1].kind == SExpr::Kind::Keyword);
  CHECK(es[0].items[2].kind == SExpr::Kind::Numeral);
  CHECK(es[0].items[3].kind == SExpr::Kind::Binary);
  CHECK(es[0].items[4].kind == SExpr::Kind::Hex);
  CHECK(es[0].items[5].text == "s\"q");
  CHECK(es[0].items[6].text == "x y");
  CHECK(es[1].loc.line == 2);
  CHECK(es[1].loc.column == 1);
  CHECK_THROWS_AS(read_sexprs(")"), ParseError);
}

TEST_CASE("parsing the 29/2 script") {
  const Script s = parse_script(th::kFig2);
  REQUIRE(s.commands.size() == 4);
  CHECK(s.commands[0].kind == Command::Kind::DeclareConst);
  CHECK(s.commands[2].kind == Command::Kind::Minimize);
  const Problem p = problem_before(s, 3);
  REQUIRE(p.objective);
  CHECK(p.objective->sort == Sort::floating(FpSort(3, 5)));
  CHECK(p.objective->dir == Direction::Minimize);
  CHECK(p.assertions.size() == 1);
}

TEST_CASE("non-variable objectives get a fresh cost variable") {
  const Script s = parse_script(
      "(declare-const x (_ BitVec 4))(declare-const y (_ BitVec 4))(minimize (bvadd x y))");
  const Problem p = problem_of(s);
  REQUIRE(p.objective);
  CHECK(p.objective->name == "cost");
  REQUIRE(p.assertions.size() == 1);
  CHECK(to_smt2(p.assertions[0]) == "(= cost (bvadd x y))");
  const Problem q = problem_of(parse_script(
      "(declare-const cost (_ BitVec 4))(minimize (bvnot cost) :signed)"));
  CHECK(q.objective->name == "cost!1");
  CHECK(q.objective->sign == Signedness::Signed);
}

TEST_CASE("unterminated assert is reported at end of input") {
  try {
    parse_script("(declare-const c (_ FloatingPoint 3 5))\n(assert");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.loc().line == 2);
    CHECK(e.loc().column == 8);
    CHECK(std::string(e.what()).find("end of input") != std::string::npos);
  }
}

TEST_CASE("located diagnostics") {
  try {
    parse_script("(declare-const c (_ FloatingPoint 3 5))\n(assert (fp.lt (fp.add RNE c c) c))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.loc().line == 2);
    CHECK(e.loc().column == 17);
    CHECK(std::string(e.what()).find("fp.add") != std::string::npos);
  }
  try {
    parse_script("(declare-const x (_ BitVec 4))\n(assert (bvult x #b101))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.loc().line == 2);
    CHECK(std::string(e.what()).find("(bvult x #b101)") != std::string::npos);
  }
}

TEST_CASE("every malformed corpus file yields a located error") {
  unsigned n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kData / "malformed")) {
    ++n;
    const std::string text = slurp(entry.path());
    bool located = false;
    try {
      parse_script(text);
    } catch (const ParseError& e) {
      located = e.loc().line >= 1 && e.loc().column >= 1;
    }
    CHECK_MESSAGE(located, entry.path().filename().string());
  }
  CHECK(n >= 10);
}

TEST_CASE("sorts and constants") {
  const Problem p = problem_of(parse_script(
      "(declare-const a Float16)(declare-const b Float32)(declare-const c Float64)"
      "(declare-const d (_ FP 2 3))(declare-const e Bool)"
      "(assert (= d (_ NaN 2 3)))(assert (= a (_ -zero 5 11)))(assert e)"));
  CHECK(p.declarations[0].second == Sort::floating(FpSort(5, 11)));
  CHECK(p.declarations[1].second == Sort::floating(FpSort(8, 24)));
  CHECK(p.declarations[2].second == Sort::floating(FpSort(11, 53)));
  CHECK(p.declarations[3].second == Sort::floating(FpSort(2, 3)));
  CHECK(to_smt2(p.assertions[0]) == "(= d (fp #b0 #b11 #b10))");
  const Problem q = problem_of(parse_script(
      "(declare-const x (_ BitVec 8))(assert (= x (_ bv200 8)))(assert (= x #xC8))"));
  CHECK(q.assertions[0]->args[1]->bits == B("11001000"));
}

TEST_CASE("desugaring") {
  const Problem p = problem_of(parse_script(
      "(declare-const x (_ BitVec 4))(declare-const y (_ BitVec 4))(declare-const z (_ BitVec 4))"
      "(assert (= x y z))(assert (distinct x y z))(assert (bvult (bvadd x y z) #b0001))"
      "(assert (=> (= x y) (= y z) (= x z)))"));
  CHECK(to_smt2(p.assertions[0]) == "(and (= x y) (= y z))");
  CHECK(to_smt2(p.assertions[1]) ==
        "(and (not (= x y)) (not (= x z)) (not (= y z)))");
  CHECK(to_smt2(p.assertions[2]) == "(bvult (bvadd (bvadd x y) z) #b0001)");
  CHECK(to_smt2(p.assertions[3]) == "(=> (= x y) (=> (= y z) (= x z)))");
}

TEST_CASE("valid corpus round-trips and solves consistently") {
  for (const auto& entry : std::filesystem::directory_iterator(kData / "valid")) {
    const std::string text = slurp(entry.path());
    check_round_trip(text);
    const Problem p = problem_of(parse_script(text));
    REQUIRE(p.objective);
    const OracleResult oracle = brute_force_opt(p);
    for (EngineKind e : {EngineKind::OmtLinear, EngineKind::OmtBinary,
                         p.objective->sort.is_fp() ? EngineKind::OfpBs : EngineKind::ObvBs}) {
      EngineConfig c;
      c.engine = e;
      CHECK(agrees_with_oracle(*p.objective, optimize(p, c), oracle));
    }
  }
  const Problem fp = problem_of(parse_script(slurp(kData / "valid" / "fp_named.smt2")));
  EngineConfig c;
  const OptResult r = optimize(fp, c);
  CHECK(r.value_string() == "-31/32");
}

TEST_CASE("generated instances round-trip") {
  for (const Sort& s : {Sort::floating(FpSort(3, 5)), Sort::bitvec(5)})
    for (const auto& inst : generate_instances(5, s, 30, "mixed")) check_round_trip(inst.text);
  check_round_trip(th::kFig2);
  check_round_trip("(set-option :timeout 10)(set-logic QF_BV)(declare-const |odd name| (_ BitVec 3))"
                   "(define-fun f ((a (_ BitVec 3)) (b Bool)) (_ BitVec 3) (ite b a (bvnot a)))"
                   "(assert (= (f |odd name| true) #b010))(maximize |odd name| :signed)"
                   "(check-sat)(get-model)(get-objectives)(exit)");
}

TEST_CASE("interpreter output") {
  const std::string out = run(std::string(th::kFig2) + "(get-objectives)(get-model)", EngineKind::OfpBs, true);
  std::istringstream is(out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "sat");
  std::getline(is, line);
  CHECK(line == "(objectives (cost 29/2))");
  std::getline(is, line);
  CHECK(line.rfind("smt_calls=", 0) == 0);
  CHECK(line.find(" wall_ms=") != std::string::npos);
  CHECK(out.find("(define-fun cost () (_ FloatingPoint 3 5) (fp #b0 #b110 #b1101)) ; 29/2") !=
        std::string::npos);

  const std::string sat =
      run("(declare-const x (_ BitVec 3))(assert (= x #b011))(check-sat)(get-model)");
  CHECK(sat == "sat\n(model\n  (define-fun x () (_ BitVec 3) #b011) ; 3\n)\n");

  const std::string unsat = run(
      "(declare-const cost (_ BitVec 3))(assert (bvult cost #b000))(minimize cost)(check-sat)"
      "(get-objectives)",
      EngineKind::ObvBs);
  CHECK(unsat.rfind("unsat\n", 0) == 0);
  CHECK(unsat.find("(objectives") == std::string::npos);
  CHECK(unsat.find("(error") != std::string::npos);

  const std::string nan =
      run("(declare-const c (_ FloatingPoint 2 3))(assert (fp.isNaN c))(minimize c)(check-sat)");
  CHECK(nan == "sat\n(objectives (c NaN))\n");

  const std::string wrong = run(th::kFig2, EngineKind::ObvBs);
  CHECK(wrong.find("(error \"command 4: obv-bs requires") != std::string::npos);

  CHECK(run("(get-model)").find("(error \"command 1: no model") != std::string::npos);
  CHECK(run("(exit)(check-sat)").empty());
}

TEST_CASE("CNF dump") {
  const auto path = std::filesystem::temp_directory_path() / "omtbits_dump_test.cnf";
  InterpretOptions opts;
  opts.dump_cnf = path.string();
  std::ostringstream os;
  interpret(parse_script(th::kFig2), opts, os);
  const std::string cnf = slurp(path);
  CHECK(cnf.rfind("p cnf ", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("format_value") {
  CHECK(format_value(Sort::boolean(), B("1")) == "true");
  CHECK(format_value(Sort::bitvec(3), B("101")) == "#b101");
  CHECK(format_value(Sort::floating(FpSort(3, 5)), B("0 110 1101")) == "(fp #b0 #b110 #b1101)");
}

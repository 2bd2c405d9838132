#include "omtbits/oracle.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace omtbits {

namespace {

const Objective& objective_of(const Problem& problem) {
  if (!problem.objective) throw Error("problem has no objective");
  return *problem.objective;
}

bool is_nan_pattern(const Objective& obj, const Bits& bits) {
  return obj.sort.is_fp() &&
         fp_classify(FpBits(obj.sort.fp_sort(), bits)) == FpClass::NaN;
}

// Strictly better in the objective's direction; both operands non-NaN.
bool better(const Objective& obj, const Bits& a, const Bits& b) {
  BigInt va, vb;
  if (obj.sort.is_fp()) {
    const FpSort s = obj.sort.fp_sort();
    va = fp_rank(FpBits(s, a));
    vb = fp_rank(FpBits(s, b));
  } else {
    va = bv_value(BvConst(a), obj.sign);
    vb = bv_value(BvConst(b), obj.sign);
  }
  return obj.dir == Direction::Minimize ? va < vb : va > vb;
}

LitVec pattern_assumptions(const LitVec& cost, const Bits& bits) {
  LitVec out;
  for (std::size_t i = 0; i < cost.size(); ++i) out.push_back(bits[i] ? cost[i] : ~cost[i]);
  return out;
}

}  // namespace

OracleResult brute_force_opt(const Problem& problem, unsigned max_width) {
  const Objective& obj = objective_of(problem);
  const unsigned n = obj.sort.width();
  if (max_width > 16) max_width = 16;
  if (n > max_width)
    throw Error("brute force limited to objectives of at most " +
                std::to_string(max_width) + " bits (got " + std::to_string(n) + ")");
  sat::Solver solver;
  Blaster blaster(solver);
  load_problem(problem, blaster);
  const LitVec cost = blaster.map().at(obj.name).bits;

  OracleResult r;
  std::optional<Bits> nan;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
    const Bits bits = unsigned_to_bits(BigInt(p), n);
    ++r.candidates_tested;
    if (solver.solve(pattern_assumptions(cost, bits)) != sat::Status::Sat) continue;
    if (is_nan_pattern(obj, bits)) {
      if (!nan) nan = bits;
    } else if (!r.bits || better(obj, bits, *r.bits)) {
      r.bits = bits;
    }
  }
  if (r.bits) {
    r.status = OptStatus::Optimum;
  } else if (nan) {
    r.status = OptStatus::NanOnly;
    r.bits = nan;
  } else {
    r.status = OptStatus::Unsat;
  }
  return r;
}

bool verify_optimum(const Problem& problem, const Bits& claimed) {
  const Objective& obj = objective_of(problem);
  if (claimed.size() != obj.sort.width()) return false;
  {
    sat::Solver solver;
    Blaster blaster(solver);
    load_problem(problem, blaster);
    const LitVec& cost = blaster.map().at(obj.name).bits;
    if (solver.solve(pattern_assumptions(cost, claimed)) != sat::Status::Sat) return false;
  }
  sat::Solver solver;
  Blaster blaster(solver);
  load_problem(problem, blaster);
  const LitVec cost = blaster.map().at(obj.name).bits;
  const LitVec c = blaster.constant_bits(claimed);
  const bool max = obj.dir == Direction::Maximize;
  if (obj.sort.is_fp()) {
    const FpSort s = obj.sort.fp_sort();
    solver.add_clause({~blaster.fp_is_nan(cost, s)});
    if (!is_nan_pattern(obj, claimed))
      solver.add_clause({max ? blaster.fp_lt(c, cost, s) : blaster.fp_lt(cost, c, s)});
  } else {
    const bool sgn = obj.sign == Signedness::Signed;
    const LitVec& lo = max ? c : cost;
    const LitVec& hi = max ? cost : c;
    solver.add_clause({sgn ? blaster.slt(lo, hi) : blaster.ult(lo, hi)});
  }
  return solver.solve() == sat::Status::Unsat;
}

bool same_objective_value(const Objective& objective, const Bits& a, const Bits& b) {
  if (a.size() != b.size()) return false;
  if (!objective.sort.is_fp()) return a == b;
  const FpSort s = objective.sort.fp_sort();
  const bool na = fp_classify(FpBits(s, a)) == FpClass::NaN;
  const bool nb = fp_classify(FpBits(s, b)) == FpClass::NaN;
  if (na || nb) return na && nb;
  return fp_eq(FpBits(s, a), FpBits(s, b));
}

bool agrees_with_oracle(const Objective& objective, const OptResult& result,
                        const OracleResult& oracle) {
  if (result.status != oracle.status) return false;
  if (result.status == OptStatus::Unsat) return true;
  return result.optimum_bits && oracle.bits &&
         same_objective_value(objective, *result.optimum_bits, *oracle.bits);
}

bool results_agree(const Objective& objective, const OptResult& a, const OptResult& b) {
  if (a.status != b.status) return false;
  if (a.status != OptStatus::Optimum && a.status != OptStatus::NanOnly) return true;
  return a.optimum_bits && b.optimum_bits &&
         same_objective_value(objective, *a.optimum_bits, *b.optimum_bits);
}

Sort parse_sort_spec(const std::string& spec) {
  std::string s = spec;
  std::replace(s.begin(), s.end(), '(', ' ');
  std::replace(s.begin(), s.end(), ')', ' ');
  std::istringstream is(s);
  std::vector<unsigned> nums;
  std::string tok;
  while (is >> tok) {
    if (tok.find_first_not_of("0123456789") != std::string::npos)
      throw Error("malformed sort '" + spec + "': expected \"(e s)\" or \"(w)\"");
    nums.push_back(static_cast<unsigned>(std::stoul(tok)));
  }
  if (nums.size() == 1) return Sort::bitvec(nums[0]);
  if (nums.size() == 2) return Sort::floating(FpSort(nums[0], nums[1]));
  throw Error("malformed sort '" + spec + "': expected \"(e s)\" or \"(w)\"");
}

namespace {

class InstanceWriter {
 public:
  InstanceWriter(std::uint64_t seed, const Sort& sort)
      : rng_(seed), sort_(sort) {}

  std::uint64_t pick(std::uint64_t n) { return rng_() % n; }

  Bits random_bits() {
    Bits b(sort_.width());
    for (auto& x : b) x = static_cast<std::uint8_t>(rng_() & 1);
    return b;
  }

  std::string constant() {
    Bits b = random_bits();
    if (sort_.is_fp()) {
      const FpSort s = sort_.fp_sort();
      // Biased towards finite values so comparisons are rarely trivial.
      while (pick(4) != 0 && fp_classify(FpBits(s, b)) == FpClass::NaN) b = random_bits();
    }
    return literal(b);
  }

  std::string finite_constant() {
    Bits b = random_bits();
    if (sort_.is_fp()) {
      const FpSort s = sort_.fp_sort();
      for (;;) {
        const FpClass c = fp_classify(FpBits(s, b));
        if (c != FpClass::NaN && c != FpClass::PosInf && c != FpClass::NegInf) break;
        b = random_bits();
      }
    }
    return literal(b);
  }

  std::string literal(const Bits& b) const {
    if (sort_.is_bv()) return format_bv_literal(b);
    return format_value(sort_, b);
  }

  std::string term(const std::vector<std::string>& vars, bool prefer_cost) {
    std::string base;
    if (prefer_cost || pick(3) != 0)
      base = prefer_cost ? vars[0] : vars[pick(vars.size())];
    else
      base = constant();
    switch (pick(8)) {
      case 0:
        if (sort_.is_fp()) return "(fp.neg " + base + ")";
        return "(bvadd " + base + " " + constant() + ")";
      case 1:
        if (sort_.is_fp()) return "(fp.abs " + base + ")";
        return "(bvxor " + base + " " + vars[pick(vars.size())] + ")";
      case 2:
        if (sort_.is_fp())
          return std::string(pick(2) ? "(fp.min " : "(fp.max ") + base + " " + constant() + ")";
        return std::string(pick(2) ? "(bvand " : "(bvor ") + base + " " + constant() + ")";
      default: return base;
    }
  }

  std::string predicate(const std::vector<std::string>& vars) {
    static const char* fp_bin[] = {"fp.lt", "fp.leq", "fp.gt", "fp.geq", "fp.eq", "="};
    static const char* fp_un[] = {"fp.isNaN", "fp.isInfinite", "fp.isZero", "fp.isNormal",
                                  "fp.isSubnormal", "fp.isNegative", "fp.isPositive"};
    static const char* bv_bin[] = {"bvult", "bvule", "bvugt", "bvuge", "bvslt",
                                   "bvsle", "bvsgt", "bvsge", "=", "distinct"};
    const bool with_cost = pick(3) != 0;
    if (sort_.is_fp() && pick(5) == 0)
      return std::string("(") + fp_un[pick(7)] + " " + term(vars, with_cost) + ")";
    const std::string lhs = term(vars, with_cost);
    const std::string rhs = pick(2) ? constant() : term(vars, false);
    const char* op = sort_.is_fp() ? fp_bin[pick(6)] : bv_bin[pick(10)];
    return std::string("(") + op + " " + lhs + " " + rhs + ")";
  }

  std::string formula(const std::vector<std::string>& vars, unsigned depth) {
    if (depth == 0 || pick(3) == 0) return predicate(vars);
    switch (pick(4)) {
      case 0: return "(not " + formula(vars, depth - 1) + ")";
      case 1: return "(=> " + formula(vars, depth - 1) + " " + formula(vars, depth - 1) + ")";
      case 2: return "(or " + formula(vars, depth - 1) + " " + formula(vars, depth - 1) + ")";
      default: return "(and " + formula(vars, depth - 1) + " " + formula(vars, depth - 1) + ")";
    }
  }

  std::mt19937_64 rng_;
  Sort sort_;
};

std::string sort_tag(const Sort& sort) {
  if (sort.is_bv()) return "bv" + std::to_string(sort.width());
  const FpSort s = sort.fp_sort();
  return "fp" + std::to_string(s.ebits) + "_" + std::to_string(s.sbits);
}

}  // namespace

std::vector<GeneratedInstance> generate_instances(std::uint64_t seed, const Sort& sort,
                                                  unsigned count,
                                                  const std::string& profile) {
  if (sort.is_bool()) throw Error("objective sort must be a bit-vector or floating point");
  if (profile != "mixed" && profile != "nan-heavy" && profile != "chain")
    throw Error("unknown profile '" + profile + "' (mixed, nan-heavy, chain)");
  if (profile == "nan-heavy" && !sort.is_fp())
    throw Error("profile nan-heavy needs a floating-point sort");

  std::vector<GeneratedInstance> out;
  for (unsigned i = 0; i < count; ++i) {
    InstanceWriter w(seed * 0x9E3779B97F4A7C15ULL + i + 1, sort);
    const bool maximize = i % 2 == 1;
    const bool is_signed = sort.is_bv() && w.pick(2) == 1;
    std::vector<std::string> vars = {"cost"};
    const unsigned aux = 1 + static_cast<unsigned>(w.pick(2));
    for (unsigned k = 0; k < aux; ++k) vars.push_back("x" + std::to_string(k));

    std::vector<std::string> asserts;
    if (profile == "nan-heavy" && i % 5 < 2) {
      asserts.push_back(w.pick(2) ? "(fp.isNaN cost)" : "(not (fp.eq cost cost))");
      asserts.push_back("(or " + w.formula(vars, 3) + " (fp.isZero x0))");
    } else if (profile == "chain") {
      const std::string bound = w.constant();
      std::string op;
      if (sort.is_fp())
        op = maximize ? "fp.lt" : "fp.gt";
      else
        op = std::string(is_signed ? "bvs" : "bvu") + (maximize ? "lt" : "gt");
      asserts.push_back("(" + op + " cost " + bound + ")");
      if (w.pick(2)) asserts.push_back(w.formula(vars, 2));
    } else {
      const unsigned n = 1 + static_cast<unsigned>(w.pick(3));
      for (unsigned k = 0; k < n; ++k) asserts.push_back(w.formula(vars, 3));
      if (w.pick(2)) {
        // Bound the objective on the improving side so optima are often finite.
        std::string op;
        if (sort.is_fp())
          op = maximize ? "fp.leq" : "fp.geq";
        else
          op = std::string(is_signed ? "bvs" : "bvu") + (maximize ? "le" : "ge");
        asserts.push_back("(" + op + " cost " + w.finite_constant() + ")");
      }
    }

    std::ostringstream os;
    os << "; seed " << seed << " index " << i << " profile " << profile << "\n";
    os << "(set-logic " << (sort.is_fp() ? "QF_FP" : "QF_BV") << ")\n";
    for (const auto& v : vars) os << "(declare-const " << v << " " << sort.to_string() << ")\n";
    for (const auto& a : asserts) os << "(assert " << a << ")\n";
    os << (maximize ? "(maximize cost" : "(minimize cost") << (is_signed ? " :signed" : "")
       << ")\n(check-sat)\n(get-objectives)\n";

    std::ostringstream name;
    name << 's' << seed << '_' << sort_tag(sort) << '_' << profile << '_'
         << std::setw(4) << std::setfill('0') << i << ".smt2";
    out.push_back({name.str(), os.str()});
  }
  return out;
}

void write_instances(const std::filesystem::path& dir,
                     const std::vector<GeneratedInstance>& instances) {
  std::filesystem::create_directories(dir);
  for (const auto& inst : instances) {
    std::ofstream os(dir / inst.name, std::ios::binary);
    if (!os) throw Error("cannot write " + (dir / inst.name).string());
    os << inst.text;
  }
}

Problem problem_of(const Script& script) {
  for (std::size_t i = 0; i < script.commands.size(); ++i)
    if (script.commands[i].kind == Command::Kind::CheckSat) return problem_before(script, i);
  return problem_before(script, script.commands.size());
}

std::vector<EngineConfig> parse_configs(const std::string& text) {
  std::vector<EngineConfig> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::istringstream parts(item);
    std::string part;
    std::getline(parts, part, '+');
    const auto engine = parse_engine(part);
    if (!engine) throw Error("unknown engine '" + part + "' in config '" + item + "'");
    EngineConfig c;
    c.engine = *engine;
    while (std::getline(parts, part, '+')) {
      if (part == "bp") c.enhancements.bp = true;
      else if (part == "pi") c.enhancements.pi = true;
      else if (part == "so") c.enhancements.so = true;
      else throw Error("unknown enhancement '" + part + "' in config '" + item + "'");
    }
    c.validate();
    out.push_back(c);
  }
  return out;
}

std::string config_label(const EngineConfig& config) {
  std::string s = to_string(config.engine);
  if (config.enhancements.bp) s += "+bp";
  if (config.enhancements.pi) s += "+pi";
  if (config.enhancements.so) s += "+so";
  return s;
}

namespace {

bool engine_applies(EngineKind e, const Sort& sort) {
  if (e == EngineKind::OfpBs) return sort.is_fp();
  if (e == EngineKind::ObvBs) return sort.is_bv();
  return true;
}

bool unsat_confirmed(const Problem& problem) {
  sat::Solver solver;
  Blaster blaster(solver);
  load_problem(problem, blaster);
  return solver.solve() == sat::Status::Unsat;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw Error("cannot read " + p.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  const std::size_t ni = options.instances.size();
  const std::size_t nc = options.configs.size();
  std::vector<BenchRow> rows(ni * nc);

  std::vector<std::once_flag> oracle_once(ni);
  std::vector<std::optional<OracleResult>> oracle(ni);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= rows.size()) return;
      const std::size_t ii = k / nc;
      BenchRow& row = rows[k];
      row.instance = options.instances[ii].filename().string();
      row.config = options.configs[k % nc];
      try {
        const Problem problem = problem_of(parse_script(read_file(options.instances[ii])));
        const Objective& obj = objective_of(problem);
        if (!engine_applies(row.config.engine, obj.sort)) {
          row.status = "skipped";
          continue;
        }
        EngineConfig cfg = row.config;
        if (options.timeout) cfg.timeout = options.timeout;
        const OptResult r = optimize(problem, cfg);
        row.smt_calls = r.stats.smt_calls;
        row.wall_ms = r.stats.wall_ms;
        row.optimum = r.value_string();
        if (r.status == OptStatus::Unknown || r.partial) {
          row.status = "timeout";
          continue;
        }
        row.status = to_string(r.status);
        bool ok = r.status == OptStatus::Unsat
                      ? unsat_confirmed(problem)
                      : r.optimum_bits && verify_optimum(problem, *r.optimum_bits);
        if (ok && obj.sort.width() <= options.brute_force_width) {
          std::call_once(oracle_once[ii], [&] {
            oracle[ii] = brute_force_opt(problem, options.brute_force_width);
          });
          ok = agrees_with_oracle(obj, r, *oracle[ii]);
        }
        row.oracle_agreement = ok;
      } catch (const std::exception& e) {
        row.status = "error";
        row.detail = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "instance,engine,bp,pi,so,status,optimum,smt_calls,wall_ms,oracle_agreement\n";
  for (const auto& r : rows) {
    const auto& e = r.config.enhancements;
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    out << r.instance << ',' << to_string(r.config.engine) << ',' << e.bp << ',' << e.pi
        << ',' << e.so << ',' << r.status << ',' << r.optimum << ',' << r.smt_calls << ','
        << ms << ','
        << (r.oracle_agreement ? (*r.oracle_agreement ? "true" : "false") : "") << '\n';
  }
}

void write_summary(std::ostream& out, const std::vector<BenchRow>& rows) {
  struct Tally {
    unsigned solved = 0, timeout = 0, error = 0, skipped = 0, disagree = 0;
    double ms = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Tally> tally;
  for (const auto& r : rows) {
    const std::string label = config_label(r.config);
    if (!tally.count(label)) order.push_back(label);
    Tally& t = tally[label];
    if (r.status == "timeout") ++t.timeout;
    else if (r.status == "error") ++t.error;
    else if (r.status == "skipped") ++t.skipped;
    else {
      ++t.solved;
      t.ms += r.wall_ms;
      if (r.oracle_agreement && !*r.oracle_agreement) ++t.disagree;
    }
  }
  out << "config solved timeout error skipped time_ms disagree\n";
  for (const auto& label : order) {
    const Tally& t = tally[label];
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", t.ms);
    out << label << ' ' << t.solved << ' ' << t.timeout << ' ' << t.error << ' '
        << t.skipped << ' ' << ms << ' ' << t.disagree << '\n';
  }
}

}  // namespace omtbits

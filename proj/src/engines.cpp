#include "omtbits/engines.h"

#include <algorithm>

namespace omtbits {

const char* to_string(EngineKind e) {
  switch (e) {
    case EngineKind::OfpBs: return "ofp-bs";
    case EngineKind::ObvBs: return "obv-bs";
    case EngineKind::OmtLinear: return "omt-lin";
    case EngineKind::OmtBinary: return "omt-bin";
  }
  return "?";
}

std::optional<EngineKind> parse_engine(const std::string& name) {
  for (auto e : {EngineKind::OfpBs, EngineKind::ObvBs, EngineKind::OmtLinear,
                 EngineKind::OmtBinary})
    if (name == to_string(e)) return e;
  return std::nullopt;
}

void EngineConfig::validate() const {
  if (rho <= 0 || rho >= 1) throw Error("rho must lie strictly between 0 and 1");
  if (enhancements.so && !enhancements.any())
    throw Error("safe-bits restriction (so) requires bp or pi");
}

const char* to_string(OptStatus s) {
  switch (s) {
    case OptStatus::Unsat: return "unsat";
    case OptStatus::Optimum: return "optimum";
    case OptStatus::NanOnly: return "nan";
    case OptStatus::Unknown: return "unknown";
  }
  return "?";
}

std::string OptResult::value_string() const {
  if (fp_optimum) return fp_optimum->to_string();
  if (bv_optimum) return bv_optimum->str();
  return "";
}

OmtSession::OmtSession(const Problem& problem, const EngineConfig& config)
    : problem_(problem), config_(config), blaster_(solver_) {
  config_.validate();
  if (!problem_.objective) throw Error("problem has no objective");
  load_problem(problem_, blaster_);
  cost_ = blaster_.map().at(problem_.objective->name).bits;
  if (config_.timeout) deadline_ = sat::Solver::Clock::now() + *config_.timeout;
}

sat::Status OmtSession::check(const LitVec& assumptions) {
  solver_.set_deadline(deadline_);
  ++calls_;
  const sat::Status st = solver_.solve(assumptions);
  if (st == sat::Status::Sat) {
    has_model_ = true;
    cost_model_.clear();
    for (Lit l : cost_) cost_model_.push_back(solver_.model_value(l) ? 1 : 0);
    full_model_ = solver_.model();
  }
  return st;
}

bool OmtSession::timed_out() const {
  return deadline_ && sat::Solver::Clock::now() >= *deadline_;
}

Assignment OmtSession::model() const {
  Assignment out;
  for (const auto& [name, var] : blaster_.map().vars()) {
    Bits bits;
    for (Lit l : var.bits)
      bits.push_back(full_model_.at(l.var()) != l.negated() ? 1 : 0);
    out.emplace(name, std::move(bits));
  }
  return out;
}

PrecheckOutcome nan_prechecks(OmtSession& session) {
  const auto sort = session.objective().sort.fp_sort();
  switch (session.check()) {
    case sat::Status::Unsat: return PrecheckOutcome::Unsat;
    case sat::Status::Unknown: return PrecheckOutcome::Unknown;
    case sat::Status::Sat: break;
  }
  Blaster& b = session.blaster();
  const Lit not_nan = ~b.fp_is_nan(session.cost(), sort);
  if (fp_classify(FpBits(sort, session.cost_model())) != FpClass::NaN) {
    session.solver().add_clause({not_nan});
    return PrecheckOutcome::Proceed;
  }
  switch (session.check({not_nan})) {
    case sat::Status::Unsat: return PrecheckOutcome::NanOnly;
    case sat::Status::Unknown: return PrecheckOutcome::Unknown;
    case sat::Status::Sat: break;
  }
  session.solver().add_clause({not_nan});
  return PrecheckOutcome::Proceed;
}

std::vector<unsigned> safe_bits(const Objective& objective,
                                const PrefixAssignment& decided) {
  const unsigned n = objective.sort.width();
  std::vector<unsigned> out;
  if (!objective.sort.is_fp()) {
    for (unsigned i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  const FpSort s = objective.sort.fp_sort();
  out.push_back(0);
  if (decided.size() == 0) return out;
  for (unsigned i = 1; i <= s.ebits; ++i) out.push_back(i);

  const bool negative = decided.decided[0] != 0;
  const bool grows = negative == (objective.dir == Direction::Minimize);
  bool exp_zero = false;
  for (unsigned i = 1; i < std::min(decided.size(), 1 + s.ebits); ++i)
    exp_zero |= decided.decided[i] == 0;
  if (!grows || exp_zero)
    for (unsigned i = 1 + s.ebits; i < n; ++i) out.push_back(i);
  return out;
}

void apply_enhancements(sat::Solver& solver, const LitVec& cost,
                        const Objective& objective, const Enhancements& enh,
                        const Bits& attractor, const PrefixAssignment& decided) {
  if (!enh.any()) return;
  std::vector<unsigned> bits;
  if (enh.so) {
    bits = safe_bits(objective, decided);
  } else {
    for (unsigned i = 0; i < cost.size(); ++i) bits.push_back(i);
  }
  if (enh.bp) {
    std::vector<sat::Var> order;
    for (unsigned i : bits) order.push_back(cost[i].var());
    solver.set_branch_priority(std::move(order));
  }
  if (enh.pi)
    for (unsigned i : bits)
      solver.set_polarity_hint(cost[i].var(), (attractor[i] != 0) != cost[i].negated());
}

BigInt binary_pivot(const BigInt& lb, const BigInt& ub, const Rational& rho) {
  const Rational p = rho * Rational(ub) + (1 - rho) * Rational(lb);
  BigInt q = numerator(p) / denominator(p);
  if (p < 0 && Rational(q) != p) q -= 1;  // floor for negatives
  return q;
}

namespace {

using Clock = std::chrono::steady_clock;

// Rank view of the objective's order: key 0 is the best value in the
// optimization direction. NaN patterns have no key.
class ObjectiveOrder {
 public:
  explicit ObjectiveOrder(const Objective& obj) : obj_(obj) {
    count_ = obj.sort.is_fp() ? fp_rank_count(obj.sort.fp_sort())
                              : BigInt(1) << obj.sort.width();
  }

  const BigInt& count() const { return count_; }

  BigInt key(const Bits& bits) const {
    const BigInt r = rank(bits);
    return obj_.dir == Direction::Minimize ? r : count_ - 1 - r;
  }

  /// Literal for key(cost) < k.
  Lit key_below(Blaster& b, const LitVec& cost, const BigInt& k) const {
    if (obj_.dir == Direction::Minimize)
      return rank_lt(b, cost, b.constant_bits(unrank(k)));
    return rank_lt(b, b.constant_bits(unrank(count_ - 1 - k)), cost);
  }

 private:
  BigInt rank(const Bits& bits) const {
    if (obj_.sort.is_fp()) return fp_rank(FpBits(obj_.sort.fp_sort(), bits));
    BigInt v = bits_to_unsigned(bits, 0, bits.size());
    if (obj_.sign == Signedness::Signed) v ^= BigInt(1) << (bits.size() - 1);
    return v;
  }

  Bits unrank(const BigInt& r) const {
    if (obj_.sort.is_fp()) return fp_unrank(obj_.sort.fp_sort(), r).bits();
    Bits bits = unsigned_to_bits(r, obj_.sort.width());
    if (obj_.sign == Signedness::Signed) bits[0] ^= 1;
    return bits;
  }

  Lit rank_lt(Blaster& b, const LitVec& x, const LitVec& y) const {
    if (obj_.sort.is_fp()) return b.fp_rank_lt(x, y);
    return obj_.sign == Signedness::Signed ? b.slt(x, y) : b.ult(x, y);
  }

  const Objective& obj_;
  BigInt count_;
};

// Strict improvement over `value` in the sort's own order.
Lit improving_cut(OmtSession& s, const Bits& value) {
  Blaster& b = s.blaster();
  const Objective& obj = s.objective();
  const LitVec v = b.constant_bits(value);
  const bool min = obj.dir == Direction::Minimize;
  if (obj.sort.is_fp()) {
    // fp.lt treats -0 and +0 as equal, so a zero model excludes both.
    const FpSort fs = obj.sort.fp_sort();
    return min ? b.fp_lt(s.cost(), v, fs) : b.fp_lt(v, s.cost(), fs);
  }
  if (obj.sign == Signedness::Signed) return min ? b.slt(s.cost(), v) : b.slt(v, s.cost());
  return min ? b.ult(s.cost(), v) : b.ult(v, s.cost());
}

void finish(OmtSession& s, OptResult& r, OptStatus status, Clock::time_point start) {
  r.status = status;
  if (s.has_model() && status != OptStatus::Unsat) {
    r.optimum_bits = s.cost_model();
    r.model = s.model();
    const Objective& obj = s.objective();
    if (obj.sort.is_fp())
      r.fp_optimum = fp_value(FpBits(obj.sort.fp_sort(), s.cost_model()));
    else
      r.bv_optimum = bv_value(BvConst(s.cost_model()), obj.sign);
  }
  r.stats.smt_calls = s.calls();
  r.stats.hint_calls = s.solver().stats().hint_calls;
  r.stats.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

LitVec prefix_assumptions(const OmtSession& s, const PrefixAssignment& tau) {
  LitVec out;
  for (unsigned i = 0; i < tau.size(); ++i)
    out.push_back(tau.decided[i] ? s.cost()[i] : ~s.cost()[i]);
  return out;
}

// Shared MSB-to-LSB loop of ofp-bs and obv-bs. `next_attractor` recomputes
// the attractor after a bit is fixed against it; it is identity for BV.
template <typename Update>
void bit_search(OmtSession& s, OptResult& r, Bits attractor, Update next_attractor) {
  const unsigned n = static_cast<unsigned>(s.cost().size());
  const Objective& obj = s.objective();
  const Enhancements& enh = s.config().enhancements;
  PrefixAssignment tau(n);
  apply_enhancements(s.solver(), s.cost(), obj, enh, attractor, tau);

  for (unsigned i = 0; i < n; ++i) {
    ++r.stats.iterations;
    const bool target = attractor[i] != 0;
    TrajectoryRecord rec{i, target, false, false, attractor};
    if ((s.cost_model()[i] != 0) == target) {
      tau = tau.extended(target);
      rec.satisfiable = true;
      r.trajectory.records.push_back(rec);
      continue;
    }
    apply_enhancements(s.solver(), s.cost(), obj, enh, attractor, tau);
    LitVec assumptions = prefix_assumptions(s, tau);
    assumptions.push_back(target ? s.cost()[i] : ~s.cost()[i]);
    rec.solver_called = true;
    const sat::Status st = s.check(assumptions);
    if (st == sat::Status::Unknown) {
      r.partial = true;
      return;
    }
    if (st == sat::Status::Sat) {
      tau = tau.extended(target);
      rec.satisfiable = true;
    } else {
      tau = tau.extended(!target);
      attractor = next_attractor(tau);
    }
    r.trajectory.records.push_back(rec);
  }
}

}  // namespace

OptResult ofp_bs(const Problem& problem, const EngineConfig& config) {
  const auto start = Clock::now();
  OmtSession s(problem, config);
  OptResult r;
  const Objective& obj = s.objective();
  if (!obj.sort.is_fp()) throw Error("ofp-bs requires a floating-point objective");
  const FpSort sort = obj.sort.fp_sort();

  switch (nan_prechecks(s)) {
    case PrecheckOutcome::Unsat: finish(s, r, OptStatus::Unsat, start); return r;
    case PrecheckOutcome::NanOnly: finish(s, r, OptStatus::NanOnly, start); return r;
    case PrecheckOutcome::Unknown:
      r.partial = true;
      finish(s, r, OptStatus::Unknown, start);
      return r;
    case PrecheckOutcome::Proceed: break;
  }
  const Bits initial = initial_dynamic_attractor(sort, obj.dir).pattern.bits();
  bit_search(s, r, initial, [&](const PrefixAssignment& tau) {
    return update_dynamic_attractor(sort, tau, obj.dir).pattern.bits();
  });
  finish(s, r, OptStatus::Optimum, start);
  return r;
}

OptResult obv_bs(const Problem& problem, const EngineConfig& config) {
  const auto start = Clock::now();
  OmtSession s(problem, config);
  OptResult r;
  const Objective& obj = s.objective();
  if (!obj.sort.is_bv()) throw Error("obv-bs requires a bit-vector objective");

  switch (s.check()) {
    case sat::Status::Unsat: finish(s, r, OptStatus::Unsat, start); return r;
    case sat::Status::Unknown:
      r.partial = true;
      finish(s, r, OptStatus::Unknown, start);
      return r;
    case sat::Status::Sat: break;
  }
  const BvSort sort(obj.sort.width());
  const AttractorEqualities eqs =
      xor_objective(sort, bv_attractor(sort, obj.sign, obj.dir), obj.dir);
  const Bits attractor = eqs.attractor.bits();
  bit_search(s, r, attractor, [&](const PrefixAssignment&) { return attractor; });
  finish(s, r, OptStatus::Optimum, start);
  return r;
}

namespace {

// OMT-based engines use the static attractor for bp/pi.
Bits static_attractor(const Objective& obj) {
  if (obj.sort.is_fp())
    return initial_dynamic_attractor(obj.sort.fp_sort(), obj.dir).pattern.bits();
  return bv_attractor(BvSort(obj.sort.width()), obj.sign, obj.dir).bits();
}

sat::Status hinted_check(OmtSession& s, const LitVec& assumptions) {
  const Objective& obj = s.objective();
  apply_enhancements(s.solver(), s.cost(), obj, s.config().enhancements,
                     static_attractor(obj), PrefixAssignment(obj.sort.width()));
  return s.check(assumptions);
}

// Initial satisfiability (with NaN prechecks for FP). Returns false and
// fills `r` when the search must stop.
bool initial_model(OmtSession& s, OptResult& r, Clock::time_point start) {
  const Objective& obj = s.objective();
  PrecheckOutcome outcome;
  if (obj.sort.is_fp()) {
    apply_enhancements(s.solver(), s.cost(), obj, s.config().enhancements,
                       static_attractor(obj), PrefixAssignment(obj.sort.width()));
    outcome = nan_prechecks(s);
  } else {
    switch (hinted_check(s, {})) {
      case sat::Status::Sat: outcome = PrecheckOutcome::Proceed; break;
      case sat::Status::Unsat: outcome = PrecheckOutcome::Unsat; break;
      default: outcome = PrecheckOutcome::Unknown; break;
    }
  }
  switch (outcome) {
    case PrecheckOutcome::Proceed: return true;
    case PrecheckOutcome::Unsat: finish(s, r, OptStatus::Unsat, start); break;
    case PrecheckOutcome::NanOnly: finish(s, r, OptStatus::NanOnly, start); break;
    case PrecheckOutcome::Unknown:
      r.partial = true;
      finish(s, r, OptStatus::Unknown, start);
      break;
  }
  return false;
}

}  // namespace

OptResult omt_linear(const Problem& problem, const EngineConfig& config) {
  const auto start = Clock::now();
  OmtSession s(problem, config);
  OptResult r;
  if (!initial_model(s, r, start)) return r;

  for (;;) {
    ++r.stats.iterations;
    const Bits best = s.cost_model();
    const Lit cut = improving_cut(s, best);
    // Cuts only ever tighten, so each one is a permanent clause.
    s.solver().add_clause({cut});
    const sat::Status st = hinted_check(s, {});
    if (st == sat::Status::Unknown) {
      r.partial = true;
      break;
    }
    if (st == sat::Status::Unsat) break;
  }
  finish(s, r, OptStatus::Optimum, start);
  return r;
}

OptResult omt_binary(const Problem& problem, const EngineConfig& config) {
  const auto start = Clock::now();
  OmtSession s(problem, config);
  OptResult r;
  if (!initial_model(s, r, start)) return r;

  const Objective& obj = s.objective();
  Blaster& b = s.blaster();
  if (obj.sort.is_fp())
    s.solver().add_clause({~b.fp_is_nan(s.cost(), obj.sort.fp_sort())});

  // Keys below lb are proven infeasible; ub is the key of the best model.
  // The search interval [lb, ub[ is empty exactly when the model is optimal.
  const ObjectiveOrder order(obj);
  BigInt lb = 0;
  BigInt ub = order.key(s.cost_model());
  while (lb < ub) {
    ++r.stats.iterations;
    const BigInt pivot = binary_pivot(lb, ub, config.rho);
    const BigInt bound = (pivot > lb && pivot <= ub) ? pivot : ub;
    const Lit cut = order.key_below(b, s.cost(), bound);
    const sat::Status st = hinted_check(s, {cut});
    if (st == sat::Status::Unknown) {
      r.partial = true;
      break;
    }
    if (st == sat::Status::Sat) {
      ub = order.key(s.cost_model());
    } else {
      lb = bound;
      s.solver().add_clause({~cut});
    }
  }
  finish(s, r, OptStatus::Optimum, start);
  return r;
}

OptResult optimize(const Problem& problem, const EngineConfig& config) {
  switch (config.engine) {
    case EngineKind::OfpBs: return ofp_bs(problem, config);
    case EngineKind::ObvBs: return obv_bs(problem, config);
    case EngineKind::OmtLinear: return omt_linear(problem, config);
    case EngineKind::OmtBinary: return omt_binary(problem, config);
  }
  throw Error("unknown engine");
}

}  // namespace omtbits

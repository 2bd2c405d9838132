#pragma once

// Optimization procedures over a bit-blasted problem:
//   ofp-bs   attractor-trajectory bit search for FP objectives
//   obv-bs   static-attractor bit search for BV objectives
//   omt-lin  linear search with strict improving cuts
//   omt-bin  binary search over the rank of the objective's order

#include "omtbits/bitblast.h"
#include "omtbits/fp.h"
#include "omtbits/sat.h"
#include "omtbits/term.h"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace omtbits {

enum class EngineKind { OfpBs, ObvBs, OmtLinear, OmtBinary };

/// "ofp-bs", "obv-bs", "omt-lin", "omt-bin".
const char* to_string(EngineKind e);
std::optional<EngineKind> parse_engine(const std::string& name);

struct Enhancements {
  bool bp = false;  // branching preference on objective bits, MSB first
  bool pi = false;  // polarity initialization to the attractor
  bool so = false;  // restrict bp/pi to safe bits
  bool any() const { return bp || pi; }
};

struct EngineConfig {
  EngineKind engine = EngineKind::OfpBs;
  Enhancements enhancements;
  Rational rho{1, 2};
  std::optional<std::chrono::milliseconds> timeout;

  /// Throws Error unless rho is in (0,1) and so implies bp or pi.
  void validate() const;
};

enum class OptStatus { Unsat, Optimum, NanOnly, Unknown };

const char* to_string(OptStatus s);

struct OptStats {
  std::uint64_t smt_calls = 0;   // solve_under_assumptions invocations
  std::uint64_t hint_calls = 0;  // polarity/priority calls issued
  std::uint64_t iterations = 0;  // outer loop rounds (search engines)
  double wall_ms = 0;
};

struct OptResult {
  OptStatus status = OptStatus::Unknown;
  /// Set when the deadline cut the search short; the model is then the best
  /// one found so far.
  bool partial = false;
  std::optional<Bits> optimum_bits;
  std::optional<FpValue> fp_optimum;
  std::optional<BigInt> bv_optimum;
  Assignment model;
  OptStats stats;
  Trajectory trajectory;  // ofp-bs / obv-bs only

  /// Printable objective value: "29/2", "-oo", "NaN", "-3", ...
  std::string value_string() const;
};

/// Solver, blasted problem, and objective bits of one optimization run.
class OmtSession {
 public:
  OmtSession(const Problem& problem, const EngineConfig& config);

  const Problem& problem() const { return problem_; }
  const Objective& objective() const { return *problem_.objective; }
  const EngineConfig& config() const { return config_; }
  sat::Solver& solver() { return solver_; }
  Blaster& blaster() { return blaster_; }
  const LitVec& cost() const { return cost_; }

  /// Counted solve call; stores the model on Sat.
  sat::Status check(const LitVec& assumptions = {});
  std::uint64_t calls() const { return calls_; }
  bool has_model() const { return has_model_; }
  const Bits& cost_model() const { return cost_model_; }
  Assignment model() const;
  bool timed_out() const;

 private:
  Problem problem_;
  EngineConfig config_;
  sat::Solver solver_;
  Blaster blaster_;
  LitVec cost_;
  std::uint64_t calls_ = 0;
  bool has_model_ = false;
  Bits cost_model_;
  std::vector<std::uint8_t> full_model_;
  std::optional<sat::Solver::Clock::time_point> deadline_;
};

enum class PrecheckOutcome { Unsat, NanOnly, Proceed, Unknown };

/// (i) solve phi; (ii) if cost is NaN in the model, solve phi /\ !isNaN(cost).
/// On Proceed, !isNaN(cost) is asserted permanently.
/// The session holds the latest model afterwards (the NaN one for NanOnly).
PrecheckOutcome nan_prechecks(OmtSession& session);

/// Objective bits whose improving direction can no longer change given the
/// decided prefix. BV objectives: every bit. FP: the sign always; exponent
/// bits once the sign is decided; fraction bits once the sign is decided and,
/// on the side that grows in magnitude, some decided exponent bit is 0.
std::vector<unsigned> safe_bits(const Objective& objective,
                                const PrefixAssignment& decided);

/// Issues the bp/pi solver hints for `attractor` given the decided prefix.
void apply_enhancements(sat::Solver& solver, const LitVec& cost,
                        const Objective& objective, const Enhancements& enh,
                        const Bits& attractor, const PrefixAssignment& decided);

/// floor(rho * ub + (1 - rho) * lb).
BigInt binary_pivot(const BigInt& lb, const BigInt& ub, const Rational& rho);

OptResult ofp_bs(const Problem& problem, const EngineConfig& config);
OptResult obv_bs(const Problem& problem, const EngineConfig& config);
OptResult omt_linear(const Problem& problem, const EngineConfig& config);
OptResult omt_binary(const Problem& problem, const EngineConfig& config);

/// Dispatches on config.engine. Problems without an objective are rejected.
OptResult optimize(const Problem& problem, const EngineConfig& config);

}  // namespace omtbits

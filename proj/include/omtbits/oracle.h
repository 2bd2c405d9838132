#pragma once

// Independent checking and benchmarking: a brute-force optimizer that only
// uses the SAT core, the bit-blaster and the fp/bv orders; an optimum
// verifier; a seeded instance generator; and a parallel benchmark runner.

#include "omtbits/engines.h"
#include "omtbits/smtlib.h"
#include "omtbits/term.h"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace omtbits {

struct OracleResult {
  OptStatus status = OptStatus::Unsat;  // Unsat, NanOnly or Optimum
  std::optional<Bits> bits;             // optimum, or a satisfiable NaN pattern
  std::uint64_t candidates_tested = 0;
};

/// Solves phi once per objective bit pattern (2^n assumption queries) and
/// picks the best satisfiable non-NaN pattern. Throws Error when the
/// objective is wider than `max_width` (at most 16).
OracleResult brute_force_opt(const Problem& problem, unsigned max_width = 16);

/// (a) phi and cost = claimed is satisfiable, and (b) phi, !isNaN(cost) and
/// cost strictly better than claimed is not. A NaN claim passes (b) only if
/// no non-NaN value is feasible. Both checks use fresh solvers.
bool verify_optimum(const Problem& problem, const Bits& claimed);

/// Value equality of two objective patterns: fp_eq for floats (NaN matches
/// NaN), integer equality for bit-vectors.
bool same_objective_value(const Objective& objective, const Bits& a, const Bits& b);

/// Engine result vs oracle: statuses match and optimum values coincide.
bool agrees_with_oracle(const Objective& objective, const OptResult& result,
                        const OracleResult& oracle);

/// Two engine results describe the same optimum.
bool results_agree(const Objective& objective, const OptResult& a, const OptResult& b);

/// Objective sort of a generator run: "(e s)" is floating point, "(w)" or "w"
/// a bit-vector.
Sort parse_sort_spec(const std::string& spec);

struct GeneratedInstance {
  std::string name;  // file name, e.g. "s7_fp3_5_0004.smt2"
  std::string text;  // SMT-LIB script
};

/// Profiles: "mixed" (random comparisons), "nan-heavy" (floats only; a share
/// of instances can only be satisfied by a NaN objective), "chain" (a
/// strict lower bound near the far end of the range). Output depends only on
/// the arguments.
std::vector<GeneratedInstance> generate_instances(std::uint64_t seed, const Sort& sort,
                                                  unsigned count,
                                                  const std::string& profile);

void write_instances(const std::filesystem::path& dir,
                     const std::vector<GeneratedInstance>& instances);

/// Problem at the first check-sat of a script (or the whole script).
Problem problem_of(const Script& script);

/// "ofp-bs", "ofp-bs+pi", "omt-bin+bp+pi+so", comma separated.
std::vector<EngineConfig> parse_configs(const std::string& text);
/// Inverse of parse_configs for one entry.
std::string config_label(const EngineConfig& config);

struct BenchRow {
  std::string instance;
  EngineConfig config;
  std::string status;   // optimum | nan | unsat | timeout | error | skipped
  std::string optimum;  // printable value, empty when none
  std::uint64_t smt_calls = 0;
  double wall_ms = 0;
  std::optional<bool> oracle_agreement;  // absent for timeouts and errors
  std::string detail;                    // error message
};

struct BenchOptions {
  std::vector<std::filesystem::path> instances;
  std::vector<EngineConfig> configs;
  unsigned jobs = 1;
  std::optional<std::chrono::milliseconds> timeout;
  /// The brute-force oracle runs when the objective width is at most this.
  unsigned brute_force_width = 12;
};

/// One row per (instance, config) pair, in instance-major order. Engines
/// that do not apply to the objective sort produce a `skipped` row. Failures
/// are recorded per row.
std::vector<BenchRow> run_bench(const BenchOptions& options);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
/// Per-config solved / timeout / error counts, total time of solved rows,
/// and disagreements.
void write_summary(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace omtbits

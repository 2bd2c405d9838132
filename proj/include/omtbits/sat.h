#pragma once

// Incremental CDCL SAT solver. Clauses are permanent; all retractable state
// is passed per call as assumptions.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace omtbits::sat {

/// Variable ids are dense from 1.
using Var = int;

/// Literal over a variable; `2 * var + negated`.
class Lit {
 public:
  constexpr Lit() = default;
  static constexpr Lit make(Var v, bool negated = false) {
    return Lit(2 * v + (negated ? 1 : 0));
  }
  static constexpr Lit from_code(int code) { return Lit(code); }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negated() const { return (code_ & 1) != 0; }
  constexpr int code() const { return code_; }
  /// DIMACS form: +v or -v.
  constexpr int dimacs() const { return negated() ? -var() : var(); }

  constexpr Lit operator~() const { return Lit(code_ ^ 1); }
  friend constexpr bool operator==(Lit, Lit) = default;
  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  constexpr explicit Lit(int code) : code_(code) {}
  int code_ = 0;
};

enum class Status { Sat, Unsat, Unknown };

const char* to_string(Status s);

struct SolverStats {
  std::uint64_t solve_calls = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t hint_calls = 0;  // set_polarity_hint + set_branch_priority
};

class Solver {
 public:
  using Clock = std::chrono::steady_clock;

  Solver();

  Var new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()) - 1; }

  /// Adds a permanent clause. Tautologies are dropped; duplicate literals
  /// merged. Returns false once the clause set is unsatisfiable at level 0
  /// (an empty clause makes the instance permanently unsat).
  bool add_clause(std::span<const Lit> clause);
  bool add_clause(std::initializer_list<Lit> clause) {
    return add_clause(std::span<const Lit>(clause.begin(), clause.size()));
  }

  /// Decides clauses /\ assumptions. Returns Unknown only when the deadline
  /// expires. The solver is reusable afterwards.
  Status solve(std::span<const Lit> assumptions = {});
  Status solve(std::initializer_list<Lit> assumptions) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
  }

  /// Model of the last Sat answer.
  bool model_value(Var v) const { return model_.at(v) != 0; }
  bool model_value(Lit l) const { return model_value(l.var()) != l.negated(); }
  const std::vector<std::uint8_t>& model() const { return model_; }

  /// Initial phase for `v` the next time it is picked as a decision.
  void set_polarity_hint(Var v, bool phase);
  /// Listed variables are decided before all others, in list order.
  /// Replaces any previous list; an empty list restores plain activity order.
  void set_branch_priority(std::vector<Var> vars);

  void set_deadline(std::optional<Clock::time_point> deadline) {
    deadline_ = deadline;
  }

  bool okay() const { return ok_; }
  const SolverStats& stats() const { return stats_; }
  /// Variable of the first free decision (not an assumption) of the last
  /// solve call, or 0 if none was made.
  Var first_decision() const { return first_decision_; }

  /// Original (non-learnt) clauses in DIMACS CNF.
  void dump_dimacs(std::ostream& os) const;
  std::size_t num_clauses() const;

 private:
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = UINT32_MAX;
  static constexpr std::uint8_t kFalse = 0, kTrue = 1, kUndef = 2;

  struct Clause {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
  };
  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  std::uint8_t value(Lit l) const {
    const std::uint8_t v = assigns_[l.var()];
    return v == kUndef ? kUndef : static_cast<std::uint8_t>(v ^ (l.negated() ? 1 : 0));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void attach(CRef cr);
  void enqueue(Lit l, CRef reason);
  std::optional<CRef> propagate();
  void analyze(CRef conflict, std::vector<Lit>& learnt, int& backtrack_level);
  bool literal_redundant(Lit l, std::uint32_t abstract_levels);
  void cancel_until(int level);
  Lit pick_branch_lit();
  Status search(std::span<const Lit> assumptions, std::uint64_t conflict_limit);
  void reduce_db();
  bool locked(CRef cr) const;
  bool out_of_time();

  // VSIDS order heap.
  void heap_insert(Var v);
  void heap_percolate_up(int pos);
  void heap_percolate_down(int pos);
  Var heap_pop();
  void bump_var(Var v);
  void bump_clause(Clause& c);

  bool ok_ = true;
  std::vector<Clause> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;  // indexed by literal code
  std::vector<std::uint8_t> assigns_;
  std::vector<std::uint8_t> polarity_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::vector<Var> heap_;
  std::vector<int> heap_index_;  // -1 if absent

  std::vector<Var> priority_;
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_toclear_;

  std::vector<std::uint8_t> model_;
  double max_learnts_ = 0;
  Var first_decision_ = 0;
  std::optional<Clock::time_point> deadline_;
  SolverStats stats_;
};

}  // namespace omtbits::sat

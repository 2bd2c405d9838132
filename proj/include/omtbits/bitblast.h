#pragma once

// Tseitin translation of BV/FP terms into the clause database of a
// sat::Solver. Word-level values are literal vectors, MSB-first.

#include "omtbits/sat.h"
#include "omtbits/term.h"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace omtbits {

using sat::Lit;
using LitVec = std::vector<Lit>;

struct BlastedVar {
  Sort sort = Sort::boolean();
  LitVec bits;  // MSB-first; one literal for Bool
};

/// Stable map from declared variables to their SAT literals. Entries never
/// change once created, so objective bits survive incremental solving.
class BlastMap {
 public:
  const BlastedVar* find(const std::string& name) const;
  const BlastedVar& at(const std::string& name) const;
  const std::map<std::string, BlastedVar>& vars() const { return vars_; }

 private:
  friend class Blaster;
  std::map<std::string, BlastedVar> vars_;
};

/// Literal asserting var[bit] = value (bit 0 is the MSB). Throws Error for
/// an unknown variable or an out-of-range bit.
Lit assume_literal_for_bit(const BlastMap& map, const std::string& var,
                           unsigned bit, bool value);

class Blaster {
 public:
  explicit Blaster(sat::Solver& solver);

  sat::Solver& solver() { return solver_; }
  const BlastMap& map() const { return map_; }

  /// Allocates (or returns) the bits of a variable.
  const LitVec& declare(const std::string& name, Sort sort);
  LitVec bits(const TermRef& t);
  Lit literal(const TermRef& boolean_term);
  /// Permanently asserts a Bool term.
  void assert_formula(const TermRef& boolean_term);

  Lit true_lit() const { return true_; }
  Lit false_lit() const { return ~true_; }
  Lit constant(bool b) const { return b ? true_ : ~true_; }
  LitVec constant_bits(const Bits& bits) const;

  Lit mk_and(Lit a, Lit b);
  Lit mk_or(Lit a, Lit b) { return ~mk_and(~a, ~b); }
  Lit mk_xor(Lit a, Lit b);
  Lit mk_iff(Lit a, Lit b) { return ~mk_xor(a, b); }
  Lit mk_ite(Lit c, Lit t, Lit e);
  Lit mk_and(std::span<const Lit> xs);
  Lit mk_or(std::span<const Lit> xs);

  Lit equal(std::span<const Lit> a, std::span<const Lit> b);
  Lit ult(std::span<const Lit> a, std::span<const Lit> b);
  Lit ule(std::span<const Lit> a, std::span<const Lit> b) { return ~ult(b, a); }
  Lit slt(std::span<const Lit> a, std::span<const Lit> b);
  Lit sle(std::span<const Lit> a, std::span<const Lit> b) { return ~slt(b, a); }

  Lit fp_is_nan(std::span<const Lit> x, FpSort s);
  Lit fp_is_inf(std::span<const Lit> x, FpSort s);
  Lit fp_is_zero(std::span<const Lit> x, FpSort s);
  Lit fp_is_normal(std::span<const Lit> x, FpSort s);
  Lit fp_is_subnormal(std::span<const Lit> x, FpSort s);
  /// NaN-aware semantic comparisons; -0 equals +0.
  Lit fp_lt(std::span<const Lit> a, std::span<const Lit> b, FpSort s);
  Lit fp_leq(std::span<const Lit> a, std::span<const Lit> b, FpSort s);
  Lit fp_eq(std::span<const Lit> a, std::span<const Lit> b, FpSort s);
  /// Strict order of fp_rank (-0 below +0); meaningful on non-NaN inputs.
  Lit fp_rank_lt(std::span<const Lit> a, std::span<const Lit> b);

 private:
  Lit fresh() { return Lit::make(solver_.new_var()); }
  void add(std::initializer_list<Lit> c) { solver_.add_clause(c); }
  LitVec blast(const Term& t);
  LitVec add_words(std::span<const Lit> a, std::span<const Lit> b, Lit carry_in);
  LitVec mul_words(std::span<const Lit> a, std::span<const Lit> b);
  LitVec shift_words(std::span<const Lit> a, std::span<const Lit> amount,
                     bool left);
  LitVec fp_min_max(std::span<const Lit> a, std::span<const Lit> b, FpSort s,
                    bool is_min);

  sat::Solver& solver_;
  Lit true_;
  BlastMap map_;
  std::unordered_map<const Term*, LitVec> cache_;
  std::vector<TermRef> keep_alive_;
  std::unordered_map<std::uint64_t, Lit> and_cache_;
  std::unordered_map<std::uint64_t, Lit> xor_cache_;
};

/// Declares every variable of the problem (objective included) and asserts
/// all of its assertions.
void load_problem(const Problem& problem, Blaster& blaster);

}  // namespace omtbits

#include "omtbits/sat.h"

#include "omtbits/error.h"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace omtbits::sat {

namespace {

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr double kRestartBase = 100;

// Luby sequence scaled by y: 1 1 2 1 1 2 4 ...
double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

Solver::Solver() {
  // Slot 0 is unused so that variable ids start at 1.
  assigns_.push_back(kUndef);
  polarity_.push_back(0);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  activity_.push_back(0);
  heap_index_.push_back(-1);
  seen_.push_back(0);
  watches_.resize(2);
}

Var Solver::new_var() {
  const Var v = static_cast<Var>(assigns_.size());
  assigns_.push_back(kUndef);
  polarity_.push_back(0);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  activity_.push_back(0);
  heap_index_.push_back(-1);
  seen_.push_back(0);
  watches_.resize(2 * assigns_.size());
  heap_insert(v);
  return v;
}

bool Solver::add_clause(std::span<const Lit> clause) {
  for (Lit l : clause)
    if (l.var() <= 0 || l.var() > num_vars())
      throw Error("add_clause: literal references unallocated variable " +
                  std::to_string(l.var()));
  if (!ok_) return false;

  std::vector<Lit> c(clause.begin(), clause.end());
  std::sort(c.begin(), c.end());
  std::size_t j = 0;
  Lit prev = Lit::from_code(-1);
  for (Lit l : c) {
    if (value(l) == kTrue && level_[l.var()] == 0) return true;
    if (l == ~prev) return true;  // tautology
    if (l == prev || (value(l) == kFalse && level_[l.var()] == 0)) continue;
    c[j++] = prev = l;
  }
  c.resize(j);

  if (c.empty()) {
    ok_ = false;
    return false;
  }
  if (c.size() == 1) {
    enqueue(c[0], kNoReason);
    if (propagate()) ok_ = false;
    return ok_;
  }
  const CRef cr = static_cast<CRef>(clauses_.size());
  clauses_.push_back(Clause{std::move(c), 0, false, false});
  attach(cr);
  return true;
}

void Solver::attach(CRef cr) {
  const auto& lits = clauses_[cr].lits;
  watches_[lits[0].code()].push_back({cr, lits[1]});
  watches_[lits[1].code()].push_back({cr, lits[0]});
}

void Solver::enqueue(Lit l, CRef reason) {
  assigns_[l.var()] = l.negated() ? kFalse : kTrue;
  level_[l.var()] = decision_level();
  reason_[l.var()] = reason;
  trail_.push_back(l);
}

std::optional<Solver::CRef> Solver::propagate() {
  std::optional<CRef> conflict;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = ~p;
    auto& ws = watches_[false_lit.code()];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const Watcher w = ws[i];
      if (value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.cref];
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      ++i;
      const Lit first = c.lits[0];
      const Watcher kept{w.cref, first};
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = kept;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != kFalse) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1].code()].push_back(kept);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = kept;
      if (value(first) == kFalse) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (conflict) break;
  }
  return conflict;
}

void Solver::analyze(CRef conflict, std::vector<Lit>& learnt,
                     int& backtrack_level) {
  int path_count = 0;
  bool have_p = false;
  Lit p;
  learnt.clear();
  learnt.push_back(Lit());
  std::size_t index = trail_.size();
  CRef confl = conflict;

  do {
    Clause& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t j = have_p ? 1 : 0; j < c.lits.size(); ++j) {
      const Lit q = c.lits[j];
      const Var v = q.var();
      if (!seen_[v] && level_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level())
          ++path_count;
        else
          learnt.push_back(q);
      }
    }
    do {
      --index;
    } while (!seen_[trail_[index].var()]);
    p = trail_[index];
    have_p = true;
    confl = reason_[p.var()];
    seen_[p.var()] = 0;
    --path_count;
  } while (path_count > 0);
  learnt[0] = ~p;

  // Recursive minimization: drop literals implied by the rest.
  analyze_toclear_.assign(learnt.begin(), learnt.end());
  std::uint32_t abstract_levels = 0;
  for (std::size_t i = 1; i < learnt.size(); ++i)
    abstract_levels |= 1u << (level_[learnt[i].var()] & 31);
  std::size_t j = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    if (reason_[learnt[i].var()] == kNoReason ||
        !literal_redundant(learnt[i], abstract_levels))
      learnt[j++] = learnt[i];
  }
  learnt.resize(j);

  if (learnt.size() == 1) {
    backtrack_level = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[learnt[i].var()] > level_[learnt[max_i].var()]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[learnt[1].var()];
  }
  for (Lit l : analyze_toclear_) seen_[l.var()] = 0;
}

bool Solver::literal_redundant(Lit l, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(l);
  const std::size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    const Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const Clause& c = clauses_[reason_[q.var()]];
    for (std::size_t i = 1; i < c.lits.size(); ++i) {
      const Lit r = c.lits[i];
      const Var v = r.var();
      if (seen_[v] || level_[v] == 0) continue;
      if (reason_[v] != kNoReason &&
          ((1u << (level_[v] & 31)) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(r);
        analyze_toclear_.push_back(r);
      } else {
        for (std::size_t k = top; k < analyze_toclear_.size(); ++k)
          seen_[analyze_toclear_[k].var()] = 0;
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Solver::cancel_until(int level) {
  if (decision_level() <= level) return;
  const auto stop = static_cast<std::size_t>(trail_lim_[level]);
  for (std::size_t c = trail_.size(); c-- > stop;) {
    const Var x = trail_[c].var();
    assigns_[x] = kUndef;
    reason_[x] = kNoReason;
    polarity_[x] = trail_[c].negated() ? 0 : 1;  // phase saving
    heap_insert(x);
  }
  qhead_ = stop;
  trail_.resize(stop);
  trail_lim_.resize(level);
}

Lit Solver::pick_branch_lit() {
  for (Var v : priority_)
    if (assigns_[v] == kUndef) return Lit::make(v, polarity_[v] == 0);
  while (!heap_.empty()) {
    const Var v = heap_pop();
    if (assigns_[v] == kUndef) return Lit::make(v, polarity_[v] == 0);
  }
  return Lit::from_code(-1);
}

bool Solver::out_of_time() {
  return deadline_ && Clock::now() >= *deadline_;
}

bool Solver::locked(CRef cr) const {
  const Lit first = clauses_[cr].lits[0];
  return value(first) == kTrue && reason_[first.var()] == cr;
}

void Solver::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [this](CRef a, CRef b) {
    return clauses_[a].activity < clauses_[b].activity;
  });
  const std::size_t half = learnts_.size() / 2;
  std::size_t j = 0;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    Clause& c = clauses_[learnts_[i]];
    if (i < half && c.lits.size() > 2 && !locked(learnts_[i])) {
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
    } else {
      learnts_[j++] = learnts_[i];
    }
  }
  learnts_.resize(j);
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [this](const Watcher& w) {
                              return clauses_[w.cref].deleted;
                            }),
             ws.end());
  max_learnts_ *= 1.1;
}

Status Solver::search(std::span<const Lit> assumptions,
                      std::uint64_t conflict_limit) {
  std::uint64_t conflicts_here = 0;
  std::vector<Lit> learnt;
  for (;;) {
    if (auto conflict = propagate()) {
      ++stats_.conflicts;
      ++conflicts_here;
      if (decision_level() == 0) {
        ok_ = false;
        return Status::Unsat;
      }
      int backtrack_level = 0;
      analyze(*conflict, learnt, backtrack_level);
      cancel_until(backtrack_level);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        const CRef cr = static_cast<CRef>(clauses_.size());
        clauses_.push_back(Clause{learnt, 0, true, false});
        learnts_.push_back(cr);
        attach(cr);
        bump_clause(clauses_[cr]);
        enqueue(learnt[0], cr);
      }
      var_inc_ /= kVarDecay;
      clause_inc_ /= kClauseDecay;
      if ((stats_.conflicts & 255) == 0 && out_of_time()) return Status::Unknown;
      continue;
    }

    if (conflicts_here >= conflict_limit) {
      cancel_until(0);
      return Status::Unknown;
    }
    if (static_cast<double>(learnts_.size()) >= max_learnts_) reduce_db();

    Lit next = Lit::from_code(-1);
    while (decision_level() < static_cast<int>(assumptions.size())) {
      const Lit a = assumptions[decision_level()];
      if (value(a) == kTrue) {
        trail_lim_.push_back(static_cast<int>(trail_.size()));
      } else if (value(a) == kFalse) {
        return Status::Unsat;
      } else {
        next = a;
        break;
      }
    }
    if (next.code() < 0) {
      next = pick_branch_lit();
      if (next.code() < 0) return Status::Sat;
      ++stats_.decisions;
      if (first_decision_ == 0) first_decision_ = next.var();
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(next, kNoReason);
  }
}

Status Solver::solve(std::span<const Lit> assumptions) {
  for (Lit l : assumptions)
    if (l.var() <= 0 || l.var() > num_vars())
      throw Error("solve: assumption references unallocated variable " +
                  std::to_string(l.var()));
  ++stats_.solve_calls;
  first_decision_ = 0;
  model_.clear();
  if (!ok_) return Status::Unsat;
  if (max_learnts_ == 0)
    max_learnts_ = std::max<double>(2000, static_cast<double>(clauses_.size()) / 3);

  Status status = Status::Unknown;
  for (int restart = 0; status == Status::Unknown; ++restart) {
    if (out_of_time()) break;
    const auto limit =
        static_cast<std::uint64_t>(luby(2, restart) * kRestartBase);
    status = search(assumptions, limit);
    if (status == Status::Unknown) ++stats_.restarts;
  }
  if (status == Status::Sat) {
    model_.assign(assigns_.size(), 0);
    for (std::size_t v = 1; v < assigns_.size(); ++v)
      model_[v] = assigns_[v] == kTrue ? 1 : 0;
  }
  cancel_until(0);
  return status;
}

void Solver::set_polarity_hint(Var v, bool phase) {
  if (v <= 0 || v > num_vars()) throw Error("set_polarity_hint: bad variable");
  ++stats_.hint_calls;
  polarity_[v] = phase ? 1 : 0;
}

void Solver::set_branch_priority(std::vector<Var> vars) {
  for (Var v : vars)
    if (v <= 0 || v > num_vars()) throw Error("set_branch_priority: bad variable");
  ++stats_.hint_calls;
  priority_ = std::move(vars);
}

void Solver::bump_var(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_percolate_up(heap_index_[v]);
}

void Solver::bump_clause(Clause& c) {
  c.activity += clause_inc_;
  if (c.activity > 1e20) {
    for (CRef cr : learnts_) clauses_[cr].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void Solver::heap_insert(Var v) {
  if (heap_index_[v] >= 0) return;
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_percolate_up(heap_index_[v]);
}

void Solver::heap_percolate_up(int pos) {
  const Var v = heap_[pos];
  while (pos > 0) {
    const int parent = (pos - 1) >> 1;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[pos] = heap_[parent];
    heap_index_[heap_[pos]] = pos;
    pos = parent;
  }
  heap_[pos] = v;
  heap_index_[v] = pos;
}

void Solver::heap_percolate_down(int pos) {
  const Var v = heap_[pos];
  const int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]])
      ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[pos] = heap_[child];
    heap_index_[heap_[pos]] = pos;
    pos = child;
  }
  heap_[pos] = v;
  heap_index_[v] = pos;
}

Var Solver::heap_pop() {
  const Var top = heap_[0];
  heap_index_[top] = -1;
  const Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_percolate_down(0);
  }
  return top;
}

std::size_t Solver::num_clauses() const {
  std::size_t n = 0;
  for (const auto& c : clauses_)
    if (!c.learnt && !c.deleted) ++n;
  for (Lit l : trail_)
    if (level_[l.var()] == 0) ++n;
  return n;
}

void Solver::dump_dimacs(std::ostream& os) const {
  os << "p cnf " << num_vars() << ' ' << num_clauses() + (ok_ ? 0 : 1) << '\n';
  if (!ok_) os << "0\n";
  for (Lit l : trail_)
    if (level_[l.var()] == 0) os << l.dimacs() << " 0\n";
  for (const auto& c : clauses_) {
    if (c.learnt || c.deleted) continue;
    for (Lit l : c.lits) os << l.dimacs() << ' ';
    os << "0\n";
  }
}

}  // namespace omtbits::sat

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "anybnb/core.hpp"
#include "anybnb/rng.hpp"

namespace anybnb {

// Clauses hold DIMACS-style literals: +v or -v, variables 1-based.
using Clause = std::array<std::int32_t, 3>;

struct CnfInstance {
  std::uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  void validate() const {
    if (num_vars == 0) throw argument_error("cnf instance needs at least one variable");
    std::set<Clause> seen;
    for (const auto& c : clauses) {
      std::array<std::uint32_t, 3> vars;
      for (int i = 0; i < 3; ++i) {
        if (c[i] == 0) throw argument_error("zero literal in clause");
        vars[i] = static_cast<std::uint32_t>(c[i] < 0 ? -c[i] : c[i]);
        if (vars[i] > num_vars) throw argument_error("literal out of range");
      }
      if (vars[0] == vars[1] || vars[0] == vars[2] || vars[1] == vars[2])
        throw argument_error("clause variables must be distinct");
      if (!seen.insert(c).second) throw argument_error("duplicate clause");
    }
  }
};

namespace detail {

inline Clause canonical_clause(Clause c) {
  std::sort(c.begin(), c.end(), [](std::int32_t a, std::int32_t b) {
    return std::abs(a) < std::abs(b);
  });
  return c;
}

}  // namespace detail

inline std::uint64_t max_distinct_clauses(std::uint32_t num_vars) {
  if (num_vars < 3) return 0;
  std::uint64_t n = num_vars;
  return n * (n - 1) * (n - 2) / 6 * 8;
}

inline CnfInstance generate_3sat(std::uint32_t num_vars, std::uint32_t num_clauses,
                                 std::uint64_t seed) {
  if (num_vars < 3) throw argument_error("3-sat needs at least 3 variables");
  if (num_clauses > max_distinct_clauses(num_vars))
    throw argument_error("more clauses requested than distinct 3-clauses exist");
  CnfInstance out;
  out.num_vars = num_vars;
  SplitMix64 rng(mix_key(seed, 0x35a7));
  std::set<Clause> seen;
  while (out.clauses.size() < num_clauses) {
    std::array<std::uint32_t, 3> vars{};
    for (int i = 0; i < 3;) {
      auto v = static_cast<std::uint32_t>(rng.next_below(num_vars)) + 1;
      bool dup = false;
      for (int j = 0; j < i; ++j) dup |= vars[j] == v;
      if (!dup) vars[i++] = v;
    }
    Clause c;
    for (int i = 0; i < 3; ++i) {
      bool neg = rng.next_unit() < 0.5;
      c[i] = neg ? -static_cast<std::int32_t>(vars[i]) : static_cast<std::int32_t>(vars[i]);
    }
    c = detail::canonical_clause(c);
    if (seen.insert(c).second) out.clauses.push_back(c);
  }
  return out;
}

inline void write_dimacs(std::ostream& out, const CnfInstance& instance) {
  out << "p cnf " << instance.num_vars << ' ' << instance.clauses.size() << '\n';
  for (const auto& c : instance.clauses)
    out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
}

inline CnfInstance read_dimacs(std::istream& in) {
  CnfInstance out;
  std::string line;
  std::uint64_t expected = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream row(line);
    if (!header) {
      std::string p, fmt;
      if (!(row >> p >> fmt >> out.num_vars >> expected) || p != "p" || fmt != "cnf")
        throw io_error("malformed DIMACS header");
      header = true;
      continue;
    }
    Clause c{};
    int lit = 0, n = 0;
    while (row >> lit && lit != 0) {
      if (n == 3) throw io_error("clause with more than 3 literals");
      c[n++] = lit;
    }
    if (n == 0) continue;
    if (n != 3 || lit != 0) throw io_error("clause must hold 3 literals and end in 0");
    out.clauses.push_back(c);
  }
  if (!header) throw io_error("missing DIMACS header");
  if (out.clauses.size() != expected) throw io_error("clause count differs from header");
  out.validate();
  return out;
}

// Per-node scan of the clause set. A clause is active while it is neither
// satisfied nor falsified; unit counts cover active clauses whose sole
// unassigned literal is on the given variable.
struct ClauseScan {
  std::uint32_t falsified = 0;
  std::uint32_t active = 0;
  std::vector<std::uint32_t> occurrences;
  std::vector<std::uint32_t> unit_pos;
  std::vector<std::uint32_t> unit_neg;
};

// assignment: -1 unassigned, 0 false, 1 true; indexed by variable - 1
inline ClauseScan scan_clauses(const CnfInstance& instance,
                               const std::vector<std::int8_t>& assignment) {
  ClauseScan scan;
  scan.occurrences.assign(instance.num_vars, 0);
  scan.unit_pos.assign(instance.num_vars, 0);
  scan.unit_neg.assign(instance.num_vars, 0);
  for (const auto& clause : instance.clauses) {
    bool satisfied = false;
    std::uint32_t unassigned = 0;
    std::int32_t open_literal = 0;
    for (std::int32_t lit : clause) {
      std::int8_t value = assignment[static_cast<std::uint32_t>(std::abs(lit)) - 1];
      if (value < 0) {
        ++unassigned;
        open_literal = lit;
      } else if ((lit > 0) == (value == 1)) {
        satisfied = true;
        break;
      }
    }
    if (satisfied) continue;
    if (unassigned == 0) {
      ++scan.falsified;
      continue;
    }
    ++scan.active;
    for (std::int32_t lit : clause) {
      std::uint32_t var = static_cast<std::uint32_t>(std::abs(lit)) - 1;
      if (assignment[var] < 0) ++scan.occurrences[var];
    }
    if (unassigned == 1) {
      std::uint32_t var = static_cast<std::uint32_t>(std::abs(open_literal)) - 1;
      if (open_literal > 0)
        ++scan.unit_pos[var];
      else
        ++scan.unit_neg[var];
    }
  }
  return scan;
}

// Branch variable: most occurrences among active clauses, ties to the lowest
// index; falls back to the lowest unassigned variable when nothing is active.
inline std::uint32_t pick_branch_variable(const ClauseScan& scan,
                                          const std::vector<std::int8_t>& assignment) {
  std::uint32_t best_var = 0;
  std::uint32_t best_count = 0;
  bool found = false;
  for (std::uint32_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] >= 0) continue;
    if (!found || scan.occurrences[v] > best_count) {
      best_var = v;
      best_count = scan.occurrences[v];
      found = true;
    }
  }
  if (!found) throw std::logic_error("no unassigned variable to branch on");
  return best_var;
}

struct SatState {
  std::vector<std::int8_t> assignment;
  std::uint32_t assigned = 0;
  std::uint32_t falsified = 0;
};

struct SatOptions {
  // Assign pure literals for free after each branch. Satisfying a one-sided
  // variable can only help, so the optimum is unchanged; node counts are not.
  bool pure_literal_elimination = false;
};

class SatProblem {
 public:
  using State = SatState;

  explicit SatProblem(CnfInstance instance, SatOptions options = {})
      : instance_(std::make_shared<CnfInstance>(std::move(instance))), options_(options) {
    instance_->validate();
  }

  const CnfInstance& instance() const { return *instance_; }

  State root() const {
    State s;
    s.assignment.assign(instance_->num_vars, -1);
    ClauseScan scan = scan_clauses(*instance_, s.assignment);
    s.falsified = scan.falsified;
    if (options_.pure_literal_elimination) absorb_pure_literals(s);
    return s;
  }

  bool is_goal(const State& s) const { return s.assigned == instance_->num_vars; }

  Cost original_cost(const State& s) const { return static_cast<Cost>(s.falsified); }

  std::vector<Child<State>> expand(const State& s) const {
    if (is_goal(s)) return {};
    ClauseScan scan = scan_clauses(*instance_, s.assignment);
    std::uint32_t var = pick_branch_variable(scan, s.assignment);
    std::vector<Child<State>> children;
    children.reserve(2);
    for (std::int8_t value : {std::int8_t{1}, std::int8_t{0}}) {
      State child = s;
      child.assignment[var] = value;
      ++child.assigned;
      std::uint32_t newly = value == 1 ? scan.unit_neg[var] : scan.unit_pos[var];
      child.falsified += newly;
      if (options_.pure_literal_elimination) absorb_pure_literals(child);
      children.push_back({std::move(child), static_cast<Cost>(newly)});
    }
    return children;
  }

 private:
  void absorb_pure_literals(State& s) const {
    for (;;) {
      if (s.assigned == instance_->num_vars) return;
      ClauseScan scan = scan_clauses(*instance_, s.assignment);
      bool changed = false;
      for (std::uint32_t v = 0; v < instance_->num_vars; ++v) {
        if (s.assignment[v] >= 0 || scan.occurrences[v] == 0) continue;
        std::uint32_t pos = 0, neg = 0;
        for (const auto& clause : instance_->clauses) {
          bool satisfied = false;
          bool holds_v = false;
          bool v_positive = false;
          for (std::int32_t lit : clause) {
            std::uint32_t var = static_cast<std::uint32_t>(std::abs(lit)) - 1;
            std::int8_t value = s.assignment[var];
            if (value >= 0 && (lit > 0) == (value == 1)) {
              satisfied = true;
              break;
            }
            if (var == v && value < 0) {
              holds_v = true;
              v_positive = lit > 0;
            }
          }
          if (satisfied || !holds_v) continue;
          if (v_positive)
            ++pos;
          else
            ++neg;
        }
        if (pos > 0 && neg > 0) continue;
        if (pos == 0 && neg == 0) continue;
        s.assignment[v] = pos > 0 ? 1 : 0;
        ++s.assigned;
        changed = true;
        break;
      }
      if (!changed) return;
    }
  }

  std::shared_ptr<CnfInstance> instance_;
  SatOptions options_;
};

// Exhaustive scan over all assignments; per-clause masks make each assignment
// an O(clauses) check.
inline std::uint32_t max_sat_optimum_bruteforce(const CnfInstance& instance) {
  if (instance.num_vars > 20)
    throw argument_error("brute force refused above 20 variables");
  struct Pattern {
    std::uint32_t mask, need;
  };
  std::vector<Pattern> patterns;
  patterns.reserve(instance.clauses.size());
  for (const auto& clause : instance.clauses) {
    Pattern p{0, 0};
    for (std::int32_t lit : clause) {
      std::uint32_t bit = 1u << (static_cast<std::uint32_t>(std::abs(lit)) - 1);
      p.mask |= bit;
      // literal +v is false on a 0 bit, -v on a 1 bit
      if (lit < 0) p.need |= bit;
    }
    patterns.push_back(p);
  }
  std::uint32_t best = static_cast<std::uint32_t>(instance.clauses.size()) + 1;
  std::uint64_t total = 1ull << instance.num_vars;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    std::uint32_t falsified = 0;
    for (const auto& p : patterns)
      if ((static_cast<std::uint32_t>(bits) & p.mask) == p.need) ++falsified;
    best = std::min(best, falsified);
    if (best == 0) break;
  }
  return best;
}

namespace detail {

struct MaxSatExactSearch {
  const CnfInstance& instance;
  std::vector<std::int8_t> assignment;
  std::uint32_t best;

  explicit MaxSatExactSearch(const CnfInstance& cnf)
      : instance(cnf),
        assignment(cnf.num_vars, -1),
        best(static_cast<std::uint32_t>(cnf.clauses.size())) {}

  void dive(std::uint32_t falsified) {
    ClauseScan scan = scan_clauses(instance, assignment);
    if (scan.active == 0) {
      best = std::min(best, falsified);
      return;
    }
    // every variable eventually pays at least its cheaper unit side
    std::uint32_t lower = falsified;
    for (std::uint32_t v = 0; v < instance.num_vars; ++v)
      if (assignment[v] < 0) lower += std::min(scan.unit_pos[v], scan.unit_neg[v]);
    if (lower >= best) return;
    std::uint32_t var = pick_branch_variable(scan, assignment);
    std::uint32_t cost_true = scan.unit_neg[var];
    std::uint32_t cost_false = scan.unit_pos[var];
    std::int8_t first = cost_true <= cost_false ? 1 : 0;
    for (std::int8_t value : {first, static_cast<std::int8_t>(1 - first)}) {
      assignment[var] = value;
      dive(falsified + (value == 1 ? cost_true : cost_false));
      assignment[var] = -1;
    }
  }
};

}  // namespace detail

// Branch-and-bound optimum with a unit-clause lower bound; exact at any size,
// practical well past the brute-force ceiling.
inline std::uint32_t max_sat_optimum(const CnfInstance& instance) {
  detail::MaxSatExactSearch search(instance);
  search.dive(0);
  return search.best;
}

}  // namespace anybnb

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <istream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "anybnb/core.hpp"
#include "anybnb/rng.hpp"
#include "anybnb/search.hpp"

namespace anybnb {

using Arc = std::pair<std::uint16_t, std::uint16_t>;

struct AtspInstance {
  std::uint32_t n = 0;
  std::vector<std::int64_t> cost;  // row-major, diagonal ignored

  std::int64_t at(std::uint32_t i, std::uint32_t j) const { return cost[i * n + j]; }

  void validate() const {
    if (n < 3) throw argument_error("atsp needs at least 3 cities");
    if (cost.size() != static_cast<std::size_t>(n) * n)
      throw argument_error("cost matrix size mismatch");
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        if (i != j && at(i, j) < 0) throw argument_error("negative arc cost");
  }
};

// Any feasible assignment costs at most the sum of row maxima, so this value
// safely marks forbidden arcs while keeping all arithmetic total.
inline std::int64_t forbidden_ceiling(const AtspInstance& instance) {
  std::int64_t total = 0;
  for (std::uint32_t i = 0; i < instance.n; ++i) {
    std::int64_t row_max = 0;
    for (std::uint32_t j = 0; j < instance.n; ++j)
      if (i != j) row_max = std::max(row_max, instance.at(i, j));
    total += row_max;
  }
  return total + 1;
}

struct AtspCostModel {
  enum class Kind { uniform_range, i_times_j };
  Kind kind = Kind::i_times_j;
  std::int64_t high = 0;  // uniform_range only

  static AtspCostModel uniform_range(std::int64_t high) {
    if (high < 0) throw argument_error("uniform range bound must be non-negative");
    return {Kind::uniform_range, high};
  }
  static AtspCostModel i_times_j() { return {Kind::i_times_j, 0}; }
};

inline AtspInstance generate_atsp(std::uint32_t n, AtspCostModel model, std::uint64_t seed) {
  if (n < 3) throw argument_error("atsp needs at least 3 cities");
  AtspInstance out;
  out.n = n;
  out.cost.assign(static_cast<std::size_t>(n) * n, 0);
  SplitMix64 rng(mix_key(seed, 0xa75b));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::int64_t high = model.kind == AtspCostModel::Kind::uniform_range
                              ? model.high
                              : static_cast<std::int64_t>(i + 1) * (j + 1);
      out.cost[i * n + j] = rng.next_int(0, high);
    }
  return out;
}

inline void write_atsp(std::ostream& out, const AtspInstance& instance) {
  out << instance.n << '\n';
  for (std::uint32_t i = 0; i < instance.n; ++i) {
    for (std::uint32_t j = 0; j < instance.n; ++j) {
      if (j) out << ' ';
      out << (i == j ? 0 : instance.at(i, j));
    }
    out << '\n';
  }
}

inline AtspInstance read_atsp(std::istream& in) {
  AtspInstance out;
  if (!(in >> out.n)) throw io_error("missing city count");
  if (out.n < 3) throw io_error("city count below 3");
  out.cost.assign(static_cast<std::size_t>(out.n) * out.n, 0);
  for (std::uint32_t i = 0; i < out.n; ++i)
    for (std::uint32_t j = 0; j < out.n; ++j) {
      std::int64_t c;
      if (!(in >> c)) throw io_error("truncated cost matrix");
      out.cost[i * out.n + j] = i == j ? 0 : c;
    }
  out.validate();
  return out;
}

struct AssignmentSolution {
  std::int64_t value = 0;
  std::vector<std::uint16_t> match;  // row -> column
};

// Shortest augmenting path with dual potentials, O(n^3). Infeasible
// constraint sets surface as a value at or above the forbidden ceiling.
inline std::optional<AssignmentSolution> solve_assignment(
    const AtspInstance& instance, const std::vector<Arc>& included,
    const std::vector<Arc>& excluded) {
  const std::uint32_t n = instance.n;
  const std::int64_t big = forbidden_ceiling(instance);
  std::vector<std::int64_t> a(static_cast<std::size_t>(n) * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      a[i * n + j] = i == j ? big : instance.at(i, j);
  for (auto [i, j] : excluded) a[i * n + j] = big;
  for (auto [i, j] : included) {
    for (std::uint32_t k = 0; k < n; ++k)
      if (k != j) a[i * n + k] = big;
  }

  const std::int64_t unreachable = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::uint32_t> p(n + 1, n), way(n + 1, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    p[n] = i;
    std::uint32_t j0 = n;
    std::vector<std::int64_t> minv(n + 1, unreachable);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::uint32_t i0 = p[j0], j1 = n;
      std::int64_t delta = unreachable;
      for (std::uint32_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        std::int64_t cur = a[i0 * n + j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::uint32_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != n);
    do {
      std::uint32_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != n);
  }

  AssignmentSolution out;
  out.match.assign(n, 0);
  for (std::uint32_t j = 0; j < n; ++j) {
    out.match[p[j]] = static_cast<std::uint16_t>(j);
    out.value += a[p[j] * n + j];
  }
  if (out.value >= big) return std::nullopt;
  return out;
}

// Cycles of the assignment permutation, each listed from its lowest city,
// ordered by that city.
inline std::vector<std::vector<std::uint16_t>> assignment_cycles(
    const std::vector<std::uint16_t>& match) {
  std::vector<std::vector<std::uint16_t>> cycles;
  std::vector<bool> seen(match.size(), false);
  for (std::uint16_t start = 0; start < match.size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::uint16_t> cycle;
    std::uint16_t v = start;
    do {
      cycle.push_back(v);
      seen[v] = true;
      v = match[v];
    } while (v != start);
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

struct AtspState {
  std::vector<Arc> included, excluded;
  std::int64_t value = 0;
  std::vector<std::uint16_t> match;
};

inline bool atsp_is_tour(const AtspState& s) {
  return assignment_cycles(s.match).size() == 1;
}

// Subtour elimination: branch on the subtour with the fewest free arcs (ties
// to the one holding the lowest city); child i forbids the i-th free arc and
// forces the earlier ones. Children partition the parent's tour set.
inline std::vector<AtspState> carpaneto_toth_children(const AtspInstance& instance,
                                                      const AtspState& node) {
  auto cycles = assignment_cycles(node.match);
  if (cycles.size() < 2)
    throw std::logic_error("branching requires at least two subtours");

  auto is_included = [&](Arc arc) {
    return std::find(node.included.begin(), node.included.end(), arc) !=
           node.included.end();
  };
  const std::vector<std::uint16_t>* chosen = nullptr;
  std::size_t chosen_free = 0;
  for (const auto& cycle : cycles) {
    std::size_t free_count = 0;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      Arc arc{cycle[k], cycle[(k + 1) % cycle.size()]};
      if (!is_included(arc)) ++free_count;
    }
    if (!chosen || free_count < chosen_free) {
      chosen = &cycle;
      chosen_free = free_count;
    }
  }
  if (chosen_free == 0) throw integrity_error("fully included subtour");

  std::vector<Arc> free_arcs;
  for (std::size_t k = 0; k < chosen->size(); ++k) {
    Arc arc{(*chosen)[k], (*chosen)[(k + 1) % chosen->size()]};
    if (!is_included(arc)) free_arcs.push_back(arc);
  }

  std::vector<AtspState> children;
  for (std::size_t i = 0; i < free_arcs.size(); ++i) {
    AtspState child;
    child.included = node.included;
    child.excluded = node.excluded;
    child.included.insert(child.included.end(), free_arcs.begin(),
                          free_arcs.begin() + static_cast<std::ptrdiff_t>(i));
    child.excluded.push_back(free_arcs[i]);
    auto solved = solve_assignment(instance, child.included, child.excluded);
    if (!solved) continue;
    child.value = solved->value;
    child.match = std::move(solved->match);
    if (child.value < node.value)
      throw integrity_error("assignment bound decreased under added constraints");
    children.push_back(std::move(child));
  }
  return children;
}

class AtspProblem {
 public:
  using State = AtspState;

  explicit AtspProblem(AtspInstance instance)
      : instance_(std::make_shared<AtspInstance>(std::move(instance))) {
    instance_->validate();
  }

  const AtspInstance& instance() const { return *instance_; }

  State root() const {
    auto solved = solve_assignment(*instance_, {}, {});
    if (!solved) throw integrity_error("unconstrained assignment infeasible");
    State s;
    s.value = solved->value;
    s.match = std::move(solved->match);
    return s;
  }

  bool is_goal(const State& s) const { return atsp_is_tour(s); }

  Cost original_cost(const State& s) const { return static_cast<Cost>(s.value); }

  std::vector<Child<State>> expand(const State& s) const {
    if (is_goal(s)) return {};
    auto nodes = carpaneto_toth_children(*instance_, s);
    std::vector<Child<State>> children;
    children.reserve(nodes.size());
    for (auto& child : nodes) {
      Cost increment = static_cast<Cost>(child.value - s.value);
      children.push_back({std::move(child), increment});
    }
    return children;
  }

 private:
  std::shared_ptr<AtspInstance> instance_;
};

inline bool tour_respects(const std::vector<std::uint16_t>& order,
                          const std::vector<Arc>& included,
                          const std::vector<Arc>& excluded) {
  auto has_arc = [&](Arc arc) {
    for (std::size_t k = 0; k < order.size(); ++k)
      if (order[k] == arc.first && order[(k + 1) % order.size()] == arc.second)
        return true;
    return false;
  };
  for (auto arc : included)
    if (!has_arc(arc)) return false;
  for (auto arc : excluded)
    if (has_arc(arc)) return false;
  return true;
}

inline std::int64_t tour_cost(const AtspInstance& instance,
                              const std::vector<std::uint16_t>& order) {
  std::int64_t total = 0;
  for (std::size_t k = 0; k < order.size(); ++k)
    total += instance.at(order[k], order[(k + 1) % order.size()]);
  return total;
}

inline std::optional<std::int64_t> brute_force_atsp(
    const AtspInstance& instance, const std::vector<Arc>& included = {},
    const std::vector<Arc>& excluded = {}) {
  if (instance.n > 9) throw argument_error("brute force refused above 9 cities");
  std::vector<std::uint16_t> order(instance.n);
  for (std::uint32_t i = 0; i < instance.n; ++i) order[i] = static_cast<std::uint16_t>(i);
  std::optional<std::int64_t> best;
  // city 0 fixed; permuting the rest enumerates every directed tour once
  do {
    if (!tour_respects(order, included, excluded)) continue;
    std::int64_t c = tour_cost(instance, order);
    if (!best || c < *best) best = c;
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

// Direction-preserving segment relocation (Or-opt with segment length <= 3):
// the classic arc-exchange family that stays valid under asymmetric costs.
// Each candidate move evaluation counts against the generation budget.
inline AnytimeRecord local_search_baseline(const AtspInstance& instance,
                                           std::uint64_t budget, std::uint64_t seed) {
  if (budget == 0) throw argument_error("budget must be positive");
  instance.validate();
  const std::uint32_t n = instance.n;
  SplitMix64 rng(mix_key(seed, 0x10c5));
  AnytimeRecord record;
  auto started = std::chrono::steady_clock::now();
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::uint64_t evaluations = 0;

  auto note = [&](std::int64_t cost) {
    if (cost >= best) return;
    best = cost;
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    record.append(evaluations, elapsed, static_cast<Cost>(cost));
  };

  std::vector<std::uint16_t> tour(n);
  while (evaluations < budget) {
    for (std::uint32_t i = 0; i < n; ++i) tour[i] = static_cast<std::uint16_t>(i);
    for (std::uint32_t i = n - 1; i > 0; --i)
      std::swap(tour[i], tour[rng.next_below(i + 1)]);
    std::int64_t cost = tour_cost(instance, tour);
    ++evaluations;
    note(cost);

    bool improved = true;
    while (improved && evaluations < budget) {
      improved = false;
      for (std::uint32_t len = 1; len <= 3 && !improved; ++len) {
        if (len + 2 > n) break;
        for (std::uint32_t s = 0; s < n && !improved; ++s) {
          std::uint32_t e = (s + len - 1) % n;
          std::uint16_t head = tour[s], tail = tour[e];
          std::uint16_t prev = tour[(s + n - 1) % n];
          std::uint16_t next = tour[(e + 1) % n];
          std::int64_t removal = instance.at(prev, next) - instance.at(prev, head) -
                                 instance.at(tail, next);
          for (std::uint32_t t = 0; t < n && !improved; ++t) {
            // insertion point (x, y) must lie outside the removed segment
            std::uint32_t offset = (t + n - s) % n;
            if (offset < len || t == (s + n - 1) % n) continue;
            std::uint16_t x = tour[t], y = tour[(t + 1) % n];
            std::int64_t delta = removal + instance.at(x, head) +
                                 instance.at(tail, y) - instance.at(x, y);
            ++evaluations;
            if (delta < 0) {
              std::vector<std::uint16_t> moved;
              moved.reserve(n);
              std::vector<std::uint16_t> segment;
              for (std::uint32_t k = 0; k < len; ++k)
                segment.push_back(tour[(s + k) % n]);
              std::uint32_t cursor = (e + 1) % n;
              while (cursor != s) {
                moved.push_back(tour[cursor]);
                if (tour[cursor] == x)
                  for (auto city : segment) moved.push_back(city);
                cursor = (cursor + 1) % n;
              }
              tour = std::move(moved);
              cost += delta;
              note(cost);
              improved = true;
            }
            if (evaluations >= budget) break;
          }
        }
      }
    }
  }
  return record;
}

}  // namespace anybnb

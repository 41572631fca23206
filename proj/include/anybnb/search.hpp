#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "anybnb/core.hpp"

namespace anybnb {

struct AnytimeEvent {
  std::uint64_t nodes_generated = 0;
  double wall_time_seconds = 0.0;
  Cost cost = 0;
};

// One row per improvement of the best known original-space cost.
struct AnytimeRecord {
  std::vector<AnytimeEvent> events;

  void append(std::uint64_t nodes, double seconds, Cost cost) {
    if (!events.empty() &&
        (cost >= events.back().cost || nodes < events.back().nodes_generated))
      throw integrity_error("anytime events must improve strictly");
    events.push_back({nodes, seconds, cost});
  }

  std::optional<Cost> best_at(std::uint64_t budget) const {
    std::optional<Cost> best;
    for (const auto& e : events)
      if (e.nodes_generated <= budget) best = e.cost;
    return best;
  }
};

using SearchClock = std::chrono::steady_clock;

inline double seconds_since(SearchClock::time_point t0) {
  return std::chrono::duration<double>(SearchClock::now() - t0).count();
}

struct SearchOptions {
  Cost initial_upper_bound = kInfiniteCost;   // prune when search-space g >= this
  Cost record_threshold = kInfiniteCost;      // record goals improving this original cost
  std::optional<std::uint64_t> node_budget;   // generation cap; the root counts as 1
  std::optional<std::size_t> max_open_nodes;  // best-first memory cap
  std::uint64_t node_counter_offset = 0;      // added to event counters by multi-pass drivers
  std::optional<SearchClock::time_point> clock_start;
};

template <typename S>
struct SearchResult {
  std::optional<Cost> best_cost;  // best original-space goal cost found
  std::optional<S> best_solution;
  std::uint64_t nodes_generated = 0;
  std::uint64_t nodes_expanded = 0;
  bool truncated = false;
  bool optimal_proven = false;  // searched space exhausted below the bound
  std::size_t peak_open_nodes = 0;
  AnytimeRecord anytime;
};

template <typename S>
using ExpandObserver = std::function<void(const S&, Cost g, std::uint32_t depth)>;

namespace detail {

template <typename S>
struct BestFirstEntry {
  Cost g;
  std::uint32_t depth;
  std::vector<std::uint32_t> path;  // child indices from the root, for tie-breaking
  S state;
};

// priority_queue keeps the maximum on top, so "worse-than" ordering puts the
// next node to expand there: lowest cost, then deepest, then smallest path.
template <typename S>
struct BestFirstWorse {
  bool operator()(const BestFirstEntry<S>& a, const BestFirstEntry<S>& b) const {
    if (a.g != b.g) return a.g > b.g;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.path > b.path;
  }
};

inline void validate_budget(const SearchOptions& options) {
  if (options.node_budget && *options.node_budget == 0)
    throw argument_error("node budget must be positive");
}

}  // namespace detail

// Expands a minimum-cost generated-but-unexpanded node until a goal is
// popped. Yields no incumbent before termination; budgets are checked at
// expansion boundaries, so counts may overshoot by one node's children.
template <SearchProblem P>
SearchResult<typename P::State> best_first_search(
    const P& problem, const SearchOptions& options = {},
    const ExpandObserver<typename P::State>& on_expand = {}) {
  using S = typename P::State;
  using Entry = detail::BestFirstEntry<S>;
  detail::validate_budget(options);

  SearchResult<S> result;
  const auto t0 = options.clock_start.value_or(SearchClock::now());

  std::priority_queue<Entry, std::vector<Entry>, detail::BestFirstWorse<S>> open;
  {
    S root = problem.root();
    Cost root_g = problem.original_cost(root);
    result.nodes_generated = 1;
    open.push(Entry{root_g, 0, {}, std::move(root)});
  }
  result.peak_open_nodes = 1;

  while (!open.empty()) {
    Entry e = open.top();
    open.pop();
    if (problem.is_goal(e.state)) {
      result.best_cost = problem.original_cost(e.state);
      result.anytime.append(options.node_counter_offset + result.nodes_generated,
                            seconds_since(t0), *result.best_cost);
      result.best_solution = std::move(e.state);
      result.optimal_proven = true;
      return result;
    }
    auto children = problem.expand(e.state);
    ++result.nodes_expanded;
    if (on_expand) on_expand(e.state, e.g, e.depth);
    result.nodes_generated += children.size();
    for (std::size_t i = 0; i < children.size(); ++i) {
      auto& c = children[i];
      Entry child{e.g + c.increment, e.depth + 1, e.path, std::move(c.state)};
      child.path.push_back(static_cast<std::uint32_t>(i));
      open.push(std::move(child));
    }
    if (options.max_open_nodes && open.size() > *options.max_open_nodes)
      throw resource_error("best-first open list exceeded the memory cap");
    result.peak_open_nodes = std::max(result.peak_open_nodes, open.size());
    if (options.node_budget && result.nodes_generated >= *options.node_budget) {
      result.truncated = true;
      return result;
    }
  }
  return result;  // no goal exists in the searched space
}

// Depth-first branch and bound. Children are visited in ascending increment
// order (stable on ties); a node is pruned when its g meets the incumbent
// bound (weak inequality). Goals update two incumbents: the search-space
// bound u, and the original-space cost that anytime events report.
template <SearchProblem P>
SearchResult<typename P::State> dfbnb(
    const P& problem, const SearchOptions& options = {},
    const ExpandObserver<typename P::State>& on_expand = {}) {
  using S = typename P::State;
  detail::validate_budget(options);

  SearchResult<S> result;
  const auto t0 = options.clock_start.value_or(SearchClock::now());

  Cost upper = options.initial_upper_bound;
  Cost best_original = options.record_threshold;

  struct Frame {
    std::vector<Child<S>> children;  // sorted ascending by increment
    std::size_t next;
    Cost parent_g;
    std::uint32_t child_depth;
  };

  std::size_t open_count = 1;  // generated and not yet visited
  result.peak_open_nodes = 1;

  const auto visit_goal = [&](S&& s, Cost g) {
    if (g < upper) upper = g;
    Cost orig = problem.original_cost(s);
    if (orig < best_original) {
      best_original = orig;
      result.best_cost = orig;
      result.best_solution = std::move(s);
      result.anytime.append(options.node_counter_offset + result.nodes_generated,
                            seconds_since(t0), orig);
    }
  };

  std::vector<Frame> stack;
  const auto expand_to_frame = [&](const S& s, Cost g, std::uint32_t depth) {
    auto children = problem.expand(s);
    ++result.nodes_expanded;
    if (on_expand) on_expand(s, g, depth);
    result.nodes_generated += children.size();
    std::stable_sort(children.begin(), children.end(),
                     [](const Child<S>& a, const Child<S>& b) {
                       return a.increment < b.increment;
                     });
    open_count += children.size();
    result.peak_open_nodes = std::max(result.peak_open_nodes, open_count);
    stack.push_back(Frame{std::move(children), 0, g, depth + 1});
  };

  {
    S root = problem.root();
    Cost root_g = problem.original_cost(root);
    result.nodes_generated = 1;
    --open_count;
    if (root_g < upper) {
      if (problem.is_goal(root))
        visit_goal(std::move(root), root_g);
      else
        expand_to_frame(root, root_g, 0);
    }
  }

  while (!stack.empty()) {
    if (options.node_budget && result.nodes_generated >= *options.node_budget) {
      result.truncated = true;
      break;
    }
    Frame& f = stack.back();
    if (f.next >= f.children.size()) {
      stack.pop_back();
      continue;
    }
    Child<S>& c = f.children[f.next++];
    --open_count;
    Cost g = f.parent_g + c.increment;
    if (g >= upper) continue;
    if (problem.is_goal(c.state)) {
      visit_goal(std::move(c.state), g);
      continue;
    }
    expand_to_frame(c.state, g, f.child_depth);  // invalidates f and c
  }

  result.optimal_proven = !result.truncated && result.best_cost.has_value();
  return result;
}

struct EnumerationStats {
  std::optional<Cost> min_goal_g;         // minimum search-space goal cost
  std::optional<Cost> min_goal_original;  // minimum original-space goal cost
  std::uint64_t nodes_generated = 0;
  std::uint64_t goal_count = 0;
};

// Exhaustive unpruned walk of the whole space; the independent oracle the
// search algorithms are tested against. Refuses spaces above node_cap.
template <SearchProblem P>
EnumerationStats enumerate_space(const P& problem, std::uint64_t node_cap = 1'000'000) {
  using S = typename P::State;
  EnumerationStats stats;

  struct Item {
    S state;
    Cost g;
  };
  std::vector<Item> pending;
  pending.push_back(Item{problem.root(), problem.original_cost(problem.root())});
  stats.nodes_generated = 1;

  while (!pending.empty()) {
    Item item = std::move(pending.back());
    pending.pop_back();
    if (problem.is_goal(item.state)) {
      ++stats.goal_count;
      if (!stats.min_goal_g || item.g < *stats.min_goal_g) stats.min_goal_g = item.g;
      Cost orig = problem.original_cost(item.state);
      if (!stats.min_goal_original || orig < *stats.min_goal_original)
        stats.min_goal_original = orig;
      continue;
    }
    for (auto& c : problem.expand(item.state)) {
      ++stats.nodes_generated;
      if (stats.nodes_generated > node_cap)
        throw resource_error("enumeration exceeded the node cap");
      pending.push_back(Item{std::move(c.state), item.g + c.increment});
    }
  }
  return stats;
}

}  // namespace anybnb

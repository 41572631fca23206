#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "anybnb/core.hpp"
#include "anybnb/rng.hpp"
#include "anybnb/search.hpp"

namespace anybnb {

// Undirected edge, kept normalized with first < second.
using Edge = std::pair<std::uint16_t, std::uint16_t>;

inline Edge make_edge(std::uint32_t a, std::uint32_t b) {
  if (a == b) throw argument_error("self loop is not an edge");
  if (a > b) std::swap(a, b);
  return {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b)};
}

struct StspInstance {
  std::uint32_t n = 0;
  std::vector<std::int64_t> cost;  // full matrix kept symmetric

  std::int64_t at(std::uint32_t i, std::uint32_t j) const { return cost[i * n + j]; }

  void validate() const {
    if (n < 3) throw argument_error("stsp needs at least 3 cities");
    if (cost.size() != static_cast<std::size_t>(n) * n)
      throw argument_error("cost matrix size mismatch");
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) {
        if (at(i, j) != at(j, i)) throw argument_error("asymmetric entry");
        if (at(i, j) < 0) throw argument_error("negative edge cost");
      }
  }
};

inline StspInstance generate_stsp(std::uint32_t n, std::int64_t high, std::uint64_t seed) {
  if (n < 3) throw argument_error("stsp needs at least 3 cities");
  if (high < 0) throw argument_error("cost bound must be non-negative");
  StspInstance out;
  out.n = n;
  out.cost.assign(static_cast<std::size_t>(n) * n, 0);
  SplitMix64 rng(mix_key(seed, 0x57e9));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      std::int64_t c = rng.next_int(0, high);
      out.cost[i * n + j] = c;
      out.cost[j * n + i] = c;
    }
  return out;
}

inline void write_stsp(std::ostream& out, const StspInstance& instance) {
  out << instance.n << '\n';
  for (std::uint32_t i = 0; i + 1 < instance.n; ++i) {
    for (std::uint32_t j = i + 1; j < instance.n; ++j) {
      if (j > i + 1) out << ' ';
      out << instance.at(i, j);
    }
    out << '\n';
  }
}

inline StspInstance read_stsp(std::istream& in) {
  StspInstance out;
  if (!(in >> out.n)) throw io_error("missing city count");
  if (out.n < 3) throw io_error("city count below 3");
  out.cost.assign(static_cast<std::size_t>(out.n) * out.n, 0);
  for (std::uint32_t i = 0; i + 1 < out.n; ++i)
    for (std::uint32_t j = i + 1; j < out.n; ++j) {
      std::int64_t c;
      if (!(in >> c)) throw io_error("truncated cost rows");
      out.cost[i * out.n + j] = c;
      out.cost[j * out.n + i] = c;
    }
  out.validate();
  return out;
}

struct OneTree {
  std::vector<Edge> edges;
  std::vector<std::uint16_t> degrees;
  double value = 0.0;  // adjusted tree cost minus 2*sum(pi)

  bool is_tour() const {
    for (auto d : degrees)
      if (d != 2) return false;
    return true;
  }
};

namespace detail {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::uint32_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace detail

// Minimum spanning tree on cities 1..n-1 under costs c(i,j) + pi_i + pi_j,
// required edges forced first, plus the two cheapest edges at city 0. The
// value subtracts 2*sum(pi), making it a lower bound on any tour cost.
inline std::optional<OneTree> one_tree(const StspInstance& instance,
                                       const std::vector<Edge>& required,
                                       const std::vector<Edge>& forbidden,
                                       const std::vector<double>& pi) {
  const std::uint32_t n = instance.n;
  auto banned = [&](Edge e) {
    return std::find(forbidden.begin(), forbidden.end(), e) != forbidden.end();
  };
  auto adjusted = [&](Edge e) {
    return static_cast<double>(instance.at(e.first, e.second)) + pi[e.first] +
           pi[e.second];
  };

  OneTree tree;
  tree.degrees.assign(n, 0);
  detail::UnionFind components(n);
  auto take = [&](Edge e) {
    tree.edges.push_back(e);
    ++tree.degrees[e.first];
    ++tree.degrees[e.second];
    tree.value += adjusted(e);
  };

  std::uint32_t required_at_special = 0;
  for (Edge e : required) {
    if (banned(e)) return std::nullopt;
    if (e.first == 0) {
      ++required_at_special;
      continue;  // handled with the special city below
    }
    if (!components.unite(e.first, e.second)) return std::nullopt;
    take(e);
  }
  if (required_at_special > 2) return std::nullopt;

  std::vector<Edge> candidates;
  for (std::uint32_t i = 1; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      Edge e{static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j)};
      if (!banned(e)) candidates.push_back(e);
    }
  std::sort(candidates.begin(), candidates.end(), [&](Edge a, Edge b) {
    double ca = adjusted(a), cb = adjusted(b);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  for (Edge e : candidates) {
    if (tree.edges.size() == n - 2) break;
    if (components.unite(e.first, e.second)) take(e);
  }
  if (tree.edges.size() != n - 2) return std::nullopt;

  // two cheapest edges at the special city, required ones first
  std::vector<Edge> special;
  for (Edge e : required)
    if (e.first == 0) special.push_back(e);
  std::vector<Edge> free_special;
  for (std::uint32_t j = 1; j < n; ++j) {
    Edge e{0, static_cast<std::uint16_t>(j)};
    if (banned(e)) continue;
    if (std::find(special.begin(), special.end(), e) != special.end()) continue;
    free_special.push_back(e);
  }
  std::sort(free_special.begin(), free_special.end(), [&](Edge a, Edge b) {
    double ca = adjusted(a), cb = adjusted(b);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  for (Edge e : free_special) {
    if (special.size() == 2) break;
    special.push_back(e);
  }
  if (special.size() != 2) return std::nullopt;
  for (Edge e : special) take(e);

  double pi_total = 0.0;
  for (double p : pi) pi_total += p;
  tree.value -= 2.0 * pi_total;
  return tree;
}

struct HeldKarpResult {
  double bound = 0.0;
  OneTree best_tree;
  std::vector<double> pi;
  bool tour_found = false;
  std::int64_t tour_cost = 0;  // exact, from raw costs, when a tour appears
};

inline std::int64_t exact_edge_total(const StspInstance& instance,
                                     const std::vector<Edge>& edges) {
  std::int64_t total = 0;
  for (Edge e : edges) total += instance.at(e.first, e.second);
  return total;
}

// Subgradient ascent on the 1-tree bound: pi_i moves by t_k*(degree_i - 2)
// with t_k = t0*(M - k)/M. Keeps the maximum bound over all steps and stops
// early when some 1-tree is a tour.
inline std::optional<HeldKarpResult> held_karp_bound(const StspInstance& instance,
                                                     const std::vector<Edge>& required,
                                                     const std::vector<Edge>& forbidden,
                                                     std::vector<double> pi,
                                                     double upper_estimate,
                                                     std::uint32_t max_steps) {
  if (pi.empty()) pi.assign(instance.n, 0.0);
  if (max_steps == 0) max_steps = 1;

  HeldKarpResult out;
  double t0 = 0.0;
  for (std::uint32_t k = 0; k < max_steps; ++k) {
    auto tree = one_tree(instance, required, forbidden, pi);
    if (!tree) return std::nullopt;
    if (k == 0) {
      t0 = std::max(0.0, (upper_estimate - tree->value) / instance.n);
      out.bound = tree->value;
      out.best_tree = *tree;
    } else if (tree->value > out.bound) {
      out.bound = tree->value;
      out.best_tree = *tree;
    }
    if (tree->is_tour()) {
      out.tour_found = true;
      out.tour_cost = exact_edge_total(instance, tree->edges);
      out.bound = static_cast<double>(out.tour_cost);
      out.best_tree = *tree;
      break;
    }
    double step = t0 * static_cast<double>(max_steps - k) / max_steps;
    for (std::uint32_t i = 0; i < instance.n; ++i)
      pi[i] += step * (static_cast<double>(tree->degrees[i]) - 2.0);
  }
  out.pi = std::move(pi);
  return out;
}

// Tour costs are integral on integer instances, so a fractional bound rounds
// up; the slack absorbs accumulated floating-point noise.
inline double integer_bound(double bound) {
  return std::ceil(bound - 1e-6 - 1e-12 * std::abs(bound));
}

struct StspBranch {
  std::vector<Edge> required, forbidden;
};

// Volgenant-Jonker splitting on the highest-degree city v (ties to the lowest
// index): forbid its cheapest free tree edge e1; or require e1 and forbid the
// runner-up e2; or require both and forbid every other free edge at v.
// Candidates that would force three edges at a city are dropped.
inline std::vector<StspBranch> vj_children(const StspInstance& instance,
                                           const std::vector<Edge>& required,
                                           const std::vector<Edge>& forbidden,
                                           const OneTree& tree) {
  if (tree.is_tour()) throw std::logic_error("branching requires a non-tour 1-tree");
  const std::uint32_t n = instance.n;
  std::uint32_t v = 0;
  for (std::uint32_t i = 1; i < n; ++i)
    if (tree.degrees[i] > tree.degrees[v]) v = i;

  auto is_required = [&](Edge e) {
    return std::find(required.begin(), required.end(), e) != required.end();
  };
  std::vector<Edge> free_edges;
  for (Edge e : tree.edges)
    if ((e.first == v || e.second == v) && !is_required(e)) free_edges.push_back(e);
  if (free_edges.empty()) throw integrity_error("branch city has no free tree edge");
  std::sort(free_edges.begin(), free_edges.end(), [&](Edge a, Edge b) {
    std::int64_t ca = instance.at(a.first, a.second);
    std::int64_t cb = instance.at(b.first, b.second);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  Edge e1 = free_edges[0];

  std::vector<StspBranch> candidates;
  {
    StspBranch a{required, forbidden};
    a.forbidden.push_back(e1);
    candidates.push_back(std::move(a));
  }
  {
    StspBranch b{required, forbidden};
    b.required.push_back(e1);
    if (free_edges.size() > 1) b.forbidden.push_back(free_edges[1]);
    candidates.push_back(std::move(b));
  }
  if (free_edges.size() > 1) {
    StspBranch c{required, forbidden};
    c.required.push_back(e1);
    c.required.push_back(free_edges[1]);
    // two required edges saturate v, so every other free edge there leaves
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == v) continue;
      Edge e = make_edge(v, j);
      if (is_required(e) || e == e1 || e == free_edges[1]) continue;
      if (std::find(c.forbidden.begin(), c.forbidden.end(), e) == c.forbidden.end())
        c.forbidden.push_back(e);
    }
    candidates.push_back(std::move(c));
  }

  std::vector<StspBranch> children;
  for (auto& candidate : candidates) {
    std::vector<std::uint16_t> degree(n, 0);
    for (Edge e : candidate.required) {
      ++degree[e.first];
      ++degree[e.second];
    }
    bool consistent = true;
    for (std::uint32_t i = 0; i < n; ++i) consistent &= degree[i] <= 2;
    if (consistent) children.push_back(std::move(candidate));
  }
  return children;
}

struct StspState {
  std::vector<Edge> required, forbidden;
  std::vector<double> pi;
  double bound = 0.0;
  OneTree tree;
  bool tour = false;
};

class StspProblem {
 public:
  using State = StspState;

  explicit StspProblem(StspInstance instance)
      : instance_(std::make_shared<StspInstance>(std::move(instance))) {
    instance_->validate();
    upper_estimate_ = greedy_tour_estimate(*instance_);
    steps_ = std::max(1u, instance_->n / 2);
  }

  const StspInstance& instance() const { return *instance_; }

  State root() const {
    auto solved = held_karp_bound(*instance_, {}, {}, {}, upper_estimate_, steps_);
    if (!solved) throw integrity_error("unconstrained 1-tree infeasible");
    return to_state({}, {}, *solved, 0.0);
  }

  bool is_goal(const State& s) const { return s.tour; }

  Cost original_cost(const State& s) const { return s.bound; }

  std::vector<Child<State>> expand(const State& s) const {
    if (is_goal(s)) return {};
    auto branches = vj_children(*instance_, s.required, s.forbidden, s.tree);
    std::vector<Child<State>> children;
    children.reserve(branches.size());
    for (auto& branch : branches) {
      auto solved = held_karp_bound(*instance_, branch.required, branch.forbidden,
                                    s.pi, upper_estimate_, steps_);
      if (!solved) continue;
      State child = to_state(std::move(branch.required), std::move(branch.forbidden),
                             *solved, s.bound);
      Cost increment = child.bound - s.bound;
      children.push_back({std::move(child), increment});
    }
    return children;
  }

  static double greedy_tour_estimate(const StspInstance& instance) {
    const std::uint32_t n = instance.n;
    std::vector<bool> visited(n, false);
    std::uint32_t at = 0;
    visited[0] = true;
    std::int64_t total = 0;
    for (std::uint32_t step = 1; step < n; ++step) {
      std::uint32_t next = n;
      for (std::uint32_t j = 0; j < n; ++j) {
        if (visited[j]) continue;
        if (next == n || instance.at(at, j) < instance.at(at, next)) next = j;
      }
      total += instance.at(at, next);
      visited[next] = true;
      at = next;
    }
    total += instance.at(at, 0);
    return static_cast<double>(total);
  }

 private:
  State to_state(std::vector<Edge> required, std::vector<Edge> forbidden,
                 HeldKarpResult solved, double parent_bound) const {
    State s;
    s.required = std::move(required);
    s.forbidden = std::move(forbidden);
    s.pi = std::move(solved.pi);
    s.tree = std::move(solved.best_tree);
    s.tour = solved.tour_found;
    s.bound = solved.tour_found ? static_cast<double>(solved.tour_cost)
                                : integer_bound(solved.bound);
    // adding constraints never weakens the relaxation
    s.bound = std::max(s.bound, parent_bound);
    return s;
  }

  std::shared_ptr<StspInstance> instance_;
  double upper_estimate_ = 0.0;
  std::uint32_t steps_ = 1;
};

inline bool tour_respects_edges(const std::vector<std::uint16_t>& order,
                                const std::vector<Edge>& required,
                                const std::vector<Edge>& forbidden) {
  auto has_edge = [&](Edge e) {
    for (std::size_t k = 0; k < order.size(); ++k) {
      Edge t = make_edge(order[k], order[(k + 1) % order.size()]);
      if (t == e) return true;
    }
    return false;
  };
  for (Edge e : required)
    if (!has_edge(e)) return false;
  for (Edge e : forbidden)
    if (has_edge(e)) return false;
  return true;
}

inline std::optional<std::int64_t> brute_force_stsp(
    const StspInstance& instance, const std::vector<Edge>& required = {},
    const std::vector<Edge>& forbidden = {}) {
  if (instance.n > 9) throw argument_error("brute force refused above 9 cities");
  std::vector<std::uint16_t> order(instance.n);
  for (std::uint32_t i = 0; i < instance.n; ++i) order[i] = static_cast<std::uint16_t>(i);
  std::optional<std::int64_t> best;
  do {
    if (!tour_respects_edges(order, required, forbidden)) continue;
    std::int64_t total = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      total += instance.at(order[k], order[(k + 1) % order.size()]);
    if (!best || total < *best) best = total;
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return best;
}

}  // namespace anybnb

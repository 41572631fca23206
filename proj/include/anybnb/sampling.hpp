#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <vector>

#include "anybnb/core.hpp"
#include "anybnb/csv.hpp"
#include "anybnb/search.hpp"

namespace anybnb {

// Increments of every node generated, and child count of every node
// expanded, on the way to the first goal. Estimates are only meaningful once
// the first goal seals the sample. increments stay sorted ascending.
struct OnlineSample {
  std::vector<Cost> increments;
  std::vector<std::uint32_t> child_counts;
  bool sealed = false;

  static OnlineSample from_data(std::vector<Cost> increments,
                                std::vector<std::uint32_t> child_counts) {
    OnlineSample s;
    s.increments = std::move(increments);
    s.child_counts = std::move(child_counts);
    std::sort(s.increments.begin(), s.increments.end());
    s.sealed = true;
    return s;
  }

  void require_sealed() const {
    if (!sealed) throw estimation_error("sample not sealed: no goal reached yet");
  }

  bool empty() const { return increments.empty(); }

  double mean_branching() const {
    require_sealed();
    if (child_counts.empty()) throw estimation_error("no expansions sampled");
    std::uint64_t sum = 0;
    for (std::uint32_t c : child_counts) sum += c;
    return static_cast<double>(sum) / static_cast<double>(child_counts.size());
  }

  // fraction of sampled increments <= v
  double empirical_cdf(Cost v) const {
    require_sealed();
    if (increments.empty()) throw estimation_error("empty increment sample");
    auto it = std::upper_bound(increments.begin(), increments.end(), v);
    return static_cast<double>(it - increments.begin()) /
           static_cast<double>(increments.size());
  }
};

struct EpsilonStar {
  Cost value = 0.0;
  Cost lambda_hat = 0.0;  // mean of sampled increments <= value
};

// Smallest sampled increment e with b_hat * F_hat(e) >= 1: the zeroing
// threshold that puts the reduced space on the growth-regime boundary.
// Falls back to the largest sampled increment when the boundary is out of
// reach (b_hat < 1).
inline EpsilonStar epsilon_star(const OnlineSample& sample) {
  sample.require_sealed();
  if (sample.increments.empty()) throw estimation_error("empty increment sample");
  double b_hat = sample.mean_branching();
  double n = static_cast<double>(sample.increments.size());

  EpsilonStar result;
  result.value = sample.increments.back();
  for (std::size_t i = 0; i < sample.increments.size(); ++i) {
    // skip to the last duplicate so F_hat counts every copy of this value
    if (i + 1 < sample.increments.size() &&
        sample.increments[i + 1] == sample.increments[i])
      continue;
    double cdf = static_cast<double>(i + 1) / n;
    if (b_hat * cdf >= 1.0) {
      result.value = sample.increments[i];
      break;
    }
  }
  double sum = 0.0;
  std::uint64_t count = 0;
  for (Cost v : sample.increments) {
    if (v > result.value) break;
    sum += v;
    ++count;
  }
  result.lambda_hat = count ? sum / static_cast<double>(count) : 0.0;
  return result;
}

// Left-continuous empirical quantile: smallest sampled value q with
// F_hat(q) >= p.
inline Cost delta_at_quantile(const OnlineSample& sample, double p) {
  sample.require_sealed();
  if (!(p > 0.0 && p <= 1.0)) throw argument_error("quantile probability must be in (0, 1]");
  if (sample.increments.empty()) throw estimation_error("empty increment sample");
  double n = static_cast<double>(sample.increments.size());
  std::size_t index = static_cast<std::size_t>(std::ceil(p * n)) - 1;
  index = std::min(index, sample.increments.size() - 1);
  return sample.increments[index];
}

template <typename S>
struct DiveResult {
  OnlineSample sample;
  std::optional<S> first_goal;
  Cost first_goal_g = 0.0;  // search-space cost of the first goal
  std::uint64_t nodes_generated = 0;
  std::uint64_t nodes_expanded = 0;
};

// The initial descent of DFBnB (ascending-increment child order, no
// pruning), recording every generated increment and every expansion's child
// count, halting at the first goal visited. Dead ends backtrack. With a
// budget and no goal in reach the sample comes back unsealed.
template <SearchProblem P>
DiveResult<typename P::State> collect_first_dive(
    const P& problem, std::optional<std::uint64_t> node_budget = std::nullopt) {
  using S = typename P::State;
  if (node_budget && *node_budget == 0)
    throw argument_error("node budget must be positive");

  DiveResult<S> result;
  struct Frame {
    std::vector<Child<S>> children;
    std::size_t next;
    Cost parent_g;
  };
  std::vector<Frame> stack;

  std::vector<Cost> increments;
  std::vector<std::uint32_t> child_counts;

  S root = problem.root();
  Cost root_g = problem.original_cost(root);
  result.nodes_generated = 1;

  const auto seal = [&](S&& goal, Cost g) {
    result.first_goal = std::move(goal);
    result.first_goal_g = g;
    result.sample = OnlineSample::from_data(std::move(increments), std::move(child_counts));
  };

  const auto expand_to_frame = [&](const S& s, Cost g) -> bool {
    auto children = problem.expand(s);
    ++result.nodes_expanded;
    result.nodes_generated += children.size();
    child_counts.push_back(static_cast<std::uint32_t>(children.size()));
    for (const auto& c : children) increments.push_back(c.increment);
    std::stable_sort(children.begin(), children.end(),
                     [](const Child<S>& a, const Child<S>& b) {
                       return a.increment < b.increment;
                     });
    stack.push_back(Frame{std::move(children), 0, g});
    return !(node_budget && result.nodes_generated >= *node_budget);
  };

  if (problem.is_goal(root)) {
    seal(std::move(root), root_g);
    return result;
  }
  bool in_budget = expand_to_frame(root, root_g);
  while (in_budget && !stack.empty()) {
    Frame& f = stack.back();
    if (f.next >= f.children.size()) {  // dead end exhausted, backtrack
      stack.pop_back();
      continue;
    }
    Child<S>& c = f.children[f.next++];
    Cost g = f.parent_g + c.increment;
    if (problem.is_goal(c.state)) {
      seal(std::move(c.state), g);
      return result;
    }
    in_budget = expand_to_frame(c.state, g);
  }
  // budget ran out (or no goal exists): leave the sample unsealed
  result.sample.increments = std::move(increments);
  result.sample.child_counts = std::move(child_counts);
  return result;
}

// One-row audit summary: b_hat, sample size, eps*, lambda_hat, then one
// column per requested quantile.
inline std::string sample_summary_csv(const OnlineSample& sample,
                                      const std::vector<double>& quantile_ps) {
  sample.require_sealed();
  std::ostringstream out;
  out << "b_hat,sample_size,eps_star,lambda_hat";
  for (double p : quantile_ps) out << ",q_" << csv::format_number(p);
  out << "\n";
  EpsilonStar eps = epsilon_star(sample);
  out << csv::format_number(sample.mean_branching()) << ","
      << sample.increments.size() << "," << csv::format_number(eps.value) << ","
      << csv::format_number(eps.lambda_hat);
  for (double p : quantile_ps)
    out << "," << csv::format_number(delta_at_quantile(sample, p));
  out << "\n";
  return out.str();
}

}  // namespace anybnb

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "anybnb/core.hpp"
#include "anybnb/sampling.hpp"
#include "anybnb/search.hpp"

namespace anybnb {

struct EpsilonPolicy {
  Cost epsilon = 0.0;  // increments <= epsilon are rewritten to zero
};

struct DeltaPolicy {
  Cost delta = kInfiniteCost;    // children with increment > delta are dropped
  bool rescue_min_child = true;  // keep the cheapest child instead of a dead end
};

// Raw increments and child counts seen by a wrapper, for re-estimating
// thresholds between iterations.
struct ObservationPool {
  std::vector<Cost> increments;
  std::vector<std::uint32_t> child_counts;
};

// Same states, same goals; increments <= epsilon become zero. original_cost
// still reports untransformed sums, so incumbents stay comparable across
// spaces. Searching this wrapper is exactly a search of the reduced space.
template <SearchProblem P>
class EpsilonReducedProblem {
 public:
  using State = typename P::State;

  EpsilonReducedProblem(const P& inner, EpsilonPolicy policy)
      : inner_(&inner), policy_(policy), zeroed_(std::make_shared<std::uint64_t>(0)) {
    if (!(policy_.epsilon >= 0.0)) throw argument_error("epsilon must be nonnegative");
  }

  State root() const { return inner_->root(); }
  bool is_goal(const State& s) const { return inner_->is_goal(s); }
  Cost original_cost(const State& s) const { return inner_->original_cost(s); }

  std::vector<Child<State>> expand(const State& s) const {
    auto children = inner_->expand(s);
    if (pool_) {
      pool_->child_counts.push_back(static_cast<std::uint32_t>(children.size()));
      for (const auto& c : children) pool_->increments.push_back(c.increment);
    }
    for (auto& c : children) {
      if (c.increment <= policy_.epsilon) {
        if (c.increment > 0.0) ++*zeroed_;
        c.increment = 0.0;
      }
    }
    return children;
  }

  // count of strictly positive increments rewritten to zero so far
  std::uint64_t zeroing_applied() const { return *zeroed_; }
  void attach_pool(std::shared_ptr<ObservationPool> pool) { pool_ = std::move(pool); }
  Cost epsilon() const { return policy_.epsilon; }

 private:
  const P* inner_;
  EpsilonPolicy policy_;
  std::shared_ptr<std::uint64_t> zeroed_;
  std::shared_ptr<ObservationPool> pool_;
};

// Children with increment > delta are dropped; surviving increments are
// untouched. When every child of a non-goal node would go, rescue keeps the
// single cheapest one (first on ties) so the subtree keeps a path to goals.
template <SearchProblem P>
class DeltaReducedProblem {
 public:
  using State = typename P::State;

  // delta = 0 is meaningful: it keeps only zero-increment children (plus
  // rescues), which is what the quantile schedule asks for when a tenth or
  // more of the sampled increments are zero.
  DeltaReducedProblem(const P& inner, DeltaPolicy policy)
      : inner_(&inner), policy_(policy), dropped_(std::make_shared<std::uint64_t>(0)) {
    if (!(policy_.delta >= 0.0)) throw argument_error("delta must be nonnegative");
  }

  State root() const { return inner_->root(); }
  bool is_goal(const State& s) const { return inner_->is_goal(s); }
  Cost original_cost(const State& s) const { return inner_->original_cost(s); }

  std::vector<Child<State>> expand(const State& s) const {
    auto children = inner_->expand(s);
    if (pool_) {
      pool_->child_counts.push_back(static_cast<std::uint32_t>(children.size()));
      for (const auto& c : children) pool_->increments.push_back(c.increment);
    }
    if (children.empty()) return children;
    std::vector<Child<State>> kept;
    kept.reserve(children.size());
    for (auto& c : children)
      if (c.increment <= policy_.delta) kept.push_back(std::move(c));
    if (kept.empty() && policy_.rescue_min_child) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < children.size(); ++i)
        if (children[i].increment < children[best].increment) best = i;
      kept.push_back(std::move(children[best]));
    }
    *dropped_ += children.size() - kept.size();
    return kept;
  }

  std::uint64_t pruning_applied() const { return *dropped_; }
  void attach_pool(std::shared_ptr<ObservationPool> pool) { pool_ = std::move(pool); }
  Cost delta() const { return policy_.delta; }

 private:
  const P* inner_;
  DeltaPolicy policy_;
  std::shared_ptr<std::uint64_t> dropped_;
  std::shared_ptr<ObservationPool> pool_;
};

template <SearchProblem P>
EpsilonReducedProblem<P> epsilon_wrap(const P& problem, EpsilonPolicy policy) {
  return EpsilonReducedProblem<P>(problem, policy);
}

template <SearchProblem P>
DeltaReducedProblem<P> delta_wrap(const P& problem, DeltaPolicy policy) {
  return DeltaReducedProblem<P>(problem, policy);
}

// ---- iterative drivers -------------------------------------------------------

struct IterationSummary {
  int index = 0;           // 1-based
  double parameter = 0.0;  // the epsilon or delta this iteration searched with
  double quantile_p = std::numeric_limits<double>::quiet_NaN();  // delta schedule only
  std::uint64_t nodes_generated = 0;
  std::optional<Cost> incumbent;  // best original cost known after the iteration
  std::uint64_t reductions_applied = 0;
  bool truncated = false;
};

struct IterativeOptions {
  std::optional<std::uint64_t> node_budget;
  double halving_factor = 2.0;  // epsilon shrinks by this factor per iteration
  double quantile_step = 0.1;   // delta schedule raises p by this per iteration
  bool rescue_min_child = true;
  bool reestimate = false;            // pool observed increments between iterations
  bool exact_final_iteration = true;  // delta: finish with an unreduced pass
  int max_iterations = 1000;
  std::optional<OnlineSample> sample;  // skip the dive when provided
  std::optional<SearchClock::time_point> clock_start;
};

template <typename S>
struct IterativeResult {
  SearchResult<S> result;
  std::vector<IterationSummary> iterations;
  OnlineSample sample;
};

namespace detail {

inline void validate_iterative_options(const IterativeOptions& options) {
  if (options.node_budget && *options.node_budget == 0)
    throw argument_error("node budget must be positive");
  if (!(options.halving_factor > 1.0))
    throw argument_error("halving factor must exceed 1");
  if (!(options.quantile_step > 0.0 && options.quantile_step <= 1.0))
    throw argument_error("quantile step must be in (0, 1]");
  if (options.max_iterations < 1)
    throw argument_error("need at least one iteration");
}

// Shared driver scaffolding: dive (unless a sample is supplied), then one
// reduced DFBnB pass per parameter value, sharing incumbent, node counter,
// and clock across passes.
template <SearchProblem P>
struct IterativeState {
  const P& problem;
  const IterativeOptions& options;
  IterativeResult<typename P::State> out;
  SearchClock::time_point t0;
  Cost best_original = kInfiniteCost;
  std::shared_ptr<ObservationPool> pool = std::make_shared<ObservationPool>();
  bool done = false;  // dive already decided the outcome (truncation or no-goal space)

  IterativeState(const P& p, const IterativeOptions& o) : problem(p), options(o) {
    t0 = options.clock_start.value_or(SearchClock::now());
    if (options.sample) {
      out.sample = *options.sample;
      out.sample.require_sealed();
      return;
    }
    auto dive = collect_first_dive(problem, options.node_budget);
    out.result.nodes_generated = dive.nodes_generated;
    out.result.nodes_expanded = dive.nodes_expanded;
    out.sample = std::move(dive.sample);
    if (!out.sample.sealed) {
      // no goal within budget; without a budget this means no goal exists
      out.result.truncated = options.node_budget &&
                             out.result.nodes_generated >= *options.node_budget;
      done = true;
      return;
    }
    if (dive.first_goal) {
      best_original = problem.original_cost(*dive.first_goal);
      out.result.best_cost = best_original;
      out.result.best_solution = std::move(dive.first_goal);
      out.result.anytime.append(out.result.nodes_generated, seconds_since(t0),
                                best_original);
    }
  }

  bool budget_exhausted() const {
    return options.node_budget && out.result.nodes_generated >= *options.node_budget;
  }

  // Runs one reduced pass and folds its result in. Returns the pass result.
  template <typename Wrapped>
  SearchResult<typename P::State> run_pass(const Wrapped& wrapped) {
    SearchOptions so;
    so.initial_upper_bound = best_original;
    so.record_threshold = best_original;
    if (options.node_budget)
      so.node_budget = *options.node_budget - out.result.nodes_generated;
    so.node_counter_offset = out.result.nodes_generated;
    so.clock_start = t0;

    auto run = dfbnb(wrapped, so);
    out.result.nodes_generated += run.nodes_generated;
    out.result.nodes_expanded += run.nodes_expanded;
    out.result.peak_open_nodes =
        std::max(out.result.peak_open_nodes, run.peak_open_nodes);
    for (const auto& e : run.anytime.events)
      out.result.anytime.append(e.nodes_generated, e.wall_time_seconds, e.cost);
    if (run.best_cost) {
      best_original = *run.best_cost;
      out.result.best_cost = run.best_cost;
      out.result.best_solution = std::move(run.best_solution);
    }
    return run;
  }

  OnlineSample pooled_sample() const {
    std::vector<Cost> increments = out.sample.increments;
    increments.insert(increments.end(), pool->increments.begin(),
                      pool->increments.end());
    std::vector<std::uint32_t> counts = out.sample.child_counts;
    counts.insert(counts.end(), pool->child_counts.begin(),
                  pool->child_counts.end());
    return OnlineSample::from_data(std::move(increments), std::move(counts));
  }

  void finish(bool proven) {
    out.result.optimal_proven =
        proven && !out.result.truncated && out.result.best_cost.has_value();
  }
};

}  // namespace detail

// Anytime driver: iteration 1 searches the eps*-reduced space, each later
// iteration shrinks epsilon by the halving factor. Pruning tests reduced g
// against the best original cost found anywhere, which is sound because a
// node's reduced g never exceeds the original cost of any goal below it.
// An iteration that rewrites nothing is a plain exact DFBnB, so the driver
// stops there with optimal_proven.
template <SearchProblem P>
IterativeResult<typename P::State> iterative_epsilon_dfbnb(
    const P& problem, const IterativeOptions& options = {}) {
  detail::validate_iterative_options(options);
  detail::IterativeState<P> st(problem, options);
  if (st.done) return std::move(st.out);

  Cost eps = st.out.sample.empty() ? 0.0 : epsilon_star(st.out.sample).value;
  bool proven = false;
  for (int k = 1; k <= options.max_iterations; ++k) {
    if (st.budget_exhausted()) {
      st.out.result.truncated = true;
      break;
    }
    EpsilonReducedProblem<P> reduced(problem, EpsilonPolicy{eps});
    if (options.reestimate) reduced.attach_pool(st.pool);

    auto run = st.run_pass(reduced);

    IterationSummary summary;
    summary.index = k;
    summary.parameter = eps;
    summary.nodes_generated = run.nodes_generated;
    if (st.best_original < kInfiniteCost) summary.incumbent = st.best_original;
    summary.reductions_applied = reduced.zeroing_applied();
    summary.truncated = run.truncated;
    st.out.iterations.push_back(summary);

    if (run.truncated) {
      st.out.result.truncated = true;
      break;
    }
    if (reduced.zeroing_applied() == 0) {
      proven = true;
      break;
    }
    eps /= options.halving_factor;
    if (options.reestimate && !st.pool->increments.empty())
      eps = std::min(eps, epsilon_star(st.pooled_sample()).value);
  }
  st.finish(proven);
  return std::move(st.out);
}

// Anytime driver: delta starts at the sampled 0.1-quantile of increments and
// the quantile probability grows by quantile_step per iteration. Stops early
// when an iteration drops nothing (the pass was exact); once the schedule
// passes p = 1 an optional final unreduced pass keeps the unbudgeted driver
// exact even when the sample missed large increments.
template <SearchProblem P>
IterativeResult<typename P::State> iterative_delta_dfbnb(
    const P& problem, const IterativeOptions& options = {}) {
  detail::validate_iterative_options(options);
  detail::IterativeState<P> st(problem, options);
  if (st.done) return std::move(st.out);

  bool proven = false;
  bool pruned_in_last_pass = false;
  int k = 1;
  for (; k <= options.max_iterations; ++k) {
    double p = std::min(1.0, static_cast<double>(k) * options.quantile_step);
    if (st.budget_exhausted()) {
      st.out.result.truncated = true;
      break;
    }
    Cost delta;
    if (st.out.sample.empty()) {
      delta = kInfiniteCost;  // degenerate space: a single exact pass
    } else if (options.reestimate && !st.pool->increments.empty()) {
      delta = delta_at_quantile(st.pooled_sample(), p);
    } else {
      delta = delta_at_quantile(st.out.sample, p);
    }

    DeltaReducedProblem<P> reduced(problem,
                                   DeltaPolicy{delta, options.rescue_min_child});
    if (options.reestimate) reduced.attach_pool(st.pool);

    auto run = st.run_pass(reduced);

    IterationSummary summary;
    summary.index = k;
    summary.parameter = delta;
    summary.quantile_p = p;
    summary.nodes_generated = run.nodes_generated;
    if (st.best_original < kInfiniteCost) summary.incumbent = st.best_original;
    summary.reductions_applied = reduced.pruning_applied();
    summary.truncated = run.truncated;
    st.out.iterations.push_back(summary);

    if (run.truncated) {
      st.out.result.truncated = true;
      break;
    }
    pruned_in_last_pass = reduced.pruning_applied() > 0;
    if (!pruned_in_last_pass) {
      proven = true;
      break;
    }
    if (static_cast<double>(k) * options.quantile_step >= 1.0) {
      ++k;
      break;  // schedule exhausted with pruning still applied
    }
  }

  if (!proven && !st.out.result.truncated && pruned_in_last_pass &&
      options.exact_final_iteration && !st.budget_exhausted()) {
    DeltaReducedProblem<P> identity(problem, DeltaPolicy{kInfiniteCost, true});
    auto run = st.run_pass(identity);

    IterationSummary summary;
    summary.index = k;
    summary.parameter = kInfiniteCost;
    summary.nodes_generated = run.nodes_generated;
    if (st.best_original < kInfiniteCost) summary.incumbent = st.best_original;
    summary.reductions_applied = 0;
    summary.truncated = run.truncated;
    st.out.iterations.push_back(summary);

    if (run.truncated)
      st.out.result.truncated = true;
    else
      proven = true;
  }
  st.finish(proven);
  return std::move(st.out);
}

}  // namespace anybnb

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "anybnb/atsp.hpp"
#include "anybnb/config.hpp"
#include "anybnb/maxsat.hpp"
#include "anybnb/profiling.hpp"
#include "anybnb/reduction.hpp"
#include "anybnb/sampling.hpp"
#include "anybnb/search.hpp"
#include "anybnb/stsp.hpp"
#include "anybnb/tree_model.hpp"

namespace anybnb {

struct TrialOutcome {
  AnytimeRecord anytime;
  std::uint64_t nodes_generated = 0;
  std::optional<Cost> best_cost;
  bool optimal_proven = false;
  bool truncated = false;
  std::vector<IterationSummary> iterations;  // iterative drivers only
  std::optional<Cost> optimum;               // set when profiles were requested
};

struct ExperimentOutput {
  std::vector<TrialOutcome> trials;
  std::vector<std::uint64_t> budget_grid;  // grid behind profile.csv; empty without one
  std::filesystem::path out_dir;
};

namespace detail {

inline std::uint64_t trial_seed(const ExperimentConfig& config, std::uint32_t trial) {
  return mix_key(config.seed, trial);
}

template <typename F>
auto with_problem(const ExperimentConfig& config, std::uint64_t seed, F&& f) {
  switch (config.domain) {
    case Domain::tree: {
      TreeSpec spec = config.tree;
      spec.seed = seed;
      return f(TreeProblem(spec));
    }
    case Domain::atsp:
      return f(AtspProblem(generate_atsp(config.cities, config.atsp_model, seed)));
    case Domain::stsp:
      return f(StspProblem(generate_stsp(config.cities, config.cost_high, seed)));
    case Domain::maxsat:
      return f(SatProblem(generate_3sat(config.num_vars, config.num_clauses, seed)));
  }
  throw std::logic_error("unreachable domain");
}

inline IterativeOptions iterative_options(const ExperimentConfig& config) {
  IterativeOptions options;
  if (config.budget) options.node_budget = config.budget;
  options.halving_factor = config.halving_factor;
  options.quantile_step = config.quantile_step;
  options.rescue_min_child = config.rescue;
  options.reestimate = config.reestimate;
  options.exact_final_iteration = config.exact_final;
  return options;
}

template <SearchProblem P>
TrialOutcome run_one(const P& problem, const ExperimentConfig& config) {
  TrialOutcome out;
  SearchOptions options;
  if (config.budget) options.node_budget = config.budget;

  const auto absorb = [&](const SearchResult<typename P::State>& r) {
    out.anytime = r.anytime;
    out.nodes_generated = r.nodes_generated;
    out.best_cost = r.best_cost;
    out.optimal_proven = r.optimal_proven;
    out.truncated = r.truncated;
  };

  switch (config.algorithm) {
    case Algorithm::bfs:
      absorb(best_first_search(problem, options));
      break;
    case Algorithm::dfbnb:
      absorb(dfbnb(problem, options));
      break;
    case Algorithm::eps_dfbnb: {
      Cost eps = config.epsilon;
      std::uint64_t dive_nodes = 0;
      if (eps < 0.0) {
        auto dive = collect_first_dive(
            problem, config.budget ? std::optional(config.budget) : std::nullopt);
        dive_nodes = dive.nodes_generated;
        if (!dive.sample.sealed) {
          out.nodes_generated = dive_nodes;
          out.truncated = true;
          break;
        }
        eps = dive.sample.empty() ? 0.0 : epsilon_star(dive.sample).value;
      }
      SearchOptions reduced = options;
      reduced.node_counter_offset = dive_nodes;
      if (config.budget) {
        if (config.budget <= dive_nodes) {
          out.nodes_generated = dive_nodes;
          out.truncated = true;
          break;
        }
        reduced.node_budget = config.budget - dive_nodes;
      }
      auto wrapped = epsilon_wrap(problem, EpsilonPolicy{eps});
      auto r = dfbnb(wrapped, reduced);
      absorb(r);
      out.nodes_generated = dive_nodes + r.nodes_generated;
      // a pass that rewrote nothing was plain exact DFBnB; otherwise the
      // pruning was against reduced costs and proves nothing
      out.optimal_proven = r.optimal_proven && wrapped.zeroing_applied() == 0;
      break;
    }
    case Algorithm::iter_eps_dfbnb: {
      auto r = iterative_epsilon_dfbnb(problem, iterative_options(config));
      absorb(r.result);
      out.iterations = std::move(r.iterations);
      break;
    }
    case Algorithm::iter_delta_dfbnb: {
      auto r = iterative_delta_dfbnb(problem, iterative_options(config));
      absorb(r.result);
      out.iterations = std::move(r.iterations);
      break;
    }
    case Algorithm::local_search:
      throw std::logic_error("local search is dispatched on the instance");
  }
  return out;
}

inline TrialOutcome run_local_search(const ExperimentConfig& config, std::uint64_t seed) {
  AtspInstance instance = generate_atsp(config.cities, config.atsp_model, seed);
  TrialOutcome out;
  out.anytime = local_search_baseline(instance, config.budget, seed);
  out.nodes_generated = config.budget;
  if (!out.anytime.events.empty()) out.best_cost = out.anytime.events.back().cost;
  return out;
}

inline std::string optimum_cache_key(const ExperimentConfig& config, std::uint64_t seed) {
  std::ostringstream key;
  key << to_string(config.domain) << ' ';
  switch (config.domain) {
    case Domain::tree:
      key << "depth=" << config.tree.depth << " branching=" << config.tree.branching.to_string()
          << " cost_dist=" << config.tree.edge_cost.to_string();
      break;
    case Domain::atsp:
      key << "cities=" << config.cities << " model=" << atsp_model_to_string(config.atsp_model);
      break;
    case Domain::stsp:
      key << "cities=" << config.cities << " high=" << config.cost_high;
      break;
    case Domain::maxsat:
      key << "vars=" << config.num_vars << " clauses=" << config.num_clauses;
      break;
  }
  key << " seed=" << seed;
  return key.str();
}

// Content-addressed exact-optimum store: the filename is the hash of the key,
// the file repeats the key so a collision falls back to recomputing.
class OptimumCache {
 public:
  explicit OptimumCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<Cost> load(const std::string& key) const {
    std::lock_guard lock(mutex_);
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    std::string stored;
    if (!std::getline(in, stored) || stored != key) return std::nullopt;
    double value = 0.0;
    if (!(in >> value)) return std::nullopt;
    return value;
  }

  void store(const std::string& key, Cost value) const {
    std::lock_guard lock(mutex_);
    std::filesystem::create_directories(dir_);
    std::ofstream out(path_for(key));
    out << key << '\n' << detail::format_double(value) << '\n';
  }

 private:
  std::filesystem::path path_for(const std::string& key) const {
    return dir_ / (csv::to_hex(csv::fnv1a64(key)) + ".txt");
  }

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

// Exact optimum for profile scoring. nullopt means the proof ran past the
// node cap; that trial is reported without a profile.
inline std::optional<Cost> compute_optimum(const ExperimentConfig& config, std::uint64_t seed,
                                           const OptimumCache& cache) {
  const std::string key = optimum_cache_key(config, seed);
  if (auto hit = cache.load(key)) return hit;

  std::optional<Cost> value;
  if (config.domain == Domain::maxsat) {
    value = static_cast<Cost>(
        max_sat_optimum(generate_3sat(config.num_vars, config.num_clauses, seed)));
  } else {
    value = with_problem(config, seed, [&](const auto& problem) -> std::optional<Cost> {
      SearchOptions options;
      options.node_budget = config.optimum_node_cap;
      auto r = dfbnb(problem, options);
      if (!r.optimal_proven) return std::nullopt;
      return r.best_cost;
    });
  }
  if (value) cache.store(key, *value);
  return value;
}

inline unsigned env_jobs() {
  const char* raw = std::getenv("ANYBNB_JOBS");
  if (!raw) return 1;
  char* end = nullptr;
  long n = std::strtol(raw, &end, 10);
  if (end == raw || n < 1) return 1;
  return static_cast<unsigned>(std::min(n, 64L));
}

inline std::vector<std::uint64_t> derive_budget_grid(const std::vector<TrialOutcome>& trials) {
  std::uint64_t longest = 1;
  for (const auto& t : trials) longest = std::max(longest, t.nodes_generated);
  std::vector<std::uint64_t> grid;
  for (int k = 1; k <= 20; ++k) {
    std::uint64_t b = std::max<std::uint64_t>(1, longest * k / 20);
    if (grid.empty() || b > grid.back()) grid.push_back(b);
  }
  return grid;
}

inline void write_iterations_csv(std::ostream& out, const std::vector<TrialOutcome>& trials) {
  out << "trial,iteration,parameter,quantile_p,nodes_generated,incumbent,"
         "reductions_applied,truncated\n";
  for (std::size_t i = 0; i < trials.size(); ++i)
    for (const auto& it : trials[i].iterations)
      csv::write_row(out,
                     {std::to_string(i), std::to_string(it.index),
                      csv::format_number(it.parameter), csv::format_number(it.quantile_p),
                      std::to_string(it.nodes_generated),
                      it.incumbent ? csv::format_number(*it.incumbent) : "nan",
                      std::to_string(it.reductions_applied), it.truncated ? "true" : "false"});
}

}  // namespace detail

// Runs config.trials independent trials (instance i comes from seed and i),
// writes config.txt, one anytime_trial<i>.csv per trial, iterations.csv for
// the iterative drivers, profile.csv when profiles were requested, and
// summary.txt. Everything except wall-time columns is reproducible byte for
// byte. ANYBNB_JOBS > 1 runs trials concurrently; outputs keep trial order.
inline ExperimentOutput run_experiment(const ExperimentConfig& config) {
  config.validate();

  ExperimentOutput output;
  output.out_dir = config.out;
  std::filesystem::create_directories(output.out_dir);
  detail::OptimumCache cache(output.out_dir / "optimum_cache");

  output.trials.resize(config.trials);
  const auto run_trial = [&](std::uint32_t index) {
    const std::uint64_t seed = detail::trial_seed(config, index);
    TrialOutcome outcome =
        config.algorithm == Algorithm::local_search
            ? detail::run_local_search(config, seed)
            : detail::with_problem(config, seed, [&](const auto& problem) {
                return detail::run_one(problem, config);
              });
    if (config.profiles) outcome.optimum = detail::compute_optimum(config, seed, cache);
    output.trials[index] = std::move(outcome);
  };

  const unsigned jobs = std::min<unsigned>(detail::env_jobs(), config.trials);
  if (jobs <= 1) {
    for (std::uint32_t i = 0; i < config.trials; ++i) run_trial(i);
  } else {
    std::atomic<std::uint32_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::uint32_t i = next.fetch_add(1); i < config.trials; i = next.fetch_add(1))
          run_trial(i);
      });
    for (auto& worker : workers) worker.join();
  }

  {
    std::ofstream out(output.out_dir / "config.txt");
    out << serialize_config(config);
  }
  for (std::uint32_t i = 0; i < config.trials; ++i) {
    std::ofstream out(output.out_dir / ("anytime_trial" + std::to_string(i) + ".csv"));
    write_anytime_csv(out, output.trials[i].anytime);
  }
  if (config.algorithm == Algorithm::iter_eps_dfbnb ||
      config.algorithm == Algorithm::iter_delta_dfbnb) {
    std::ofstream out(output.out_dir / "iterations.csv");
    detail::write_iterations_csv(out, output.trials);
  }

  if (config.profiles) {
    std::vector<PerformanceProfile> profiles;
    output.budget_grid =
        config.budgets.empty() ? detail::derive_budget_grid(output.trials) : config.budgets;
    for (const auto& t : output.trials)
      if (t.optimum)
        profiles.push_back(profile_from_record(t.anytime, *t.optimum, output.budget_grid));
    if (!profiles.empty()) {
      std::ofstream out(output.out_dir / "profile.csv");
      write_profile_csv(out, aggregate_profiles(profiles), to_string(config.algorithm),
                        to_string(config.domain), config_hash(config));
    } else {
      output.budget_grid.clear();  // every optimum proof hit the cap
    }
  }

  {
    std::uint64_t proven = 0, truncated = 0, with_optimum = 0;
    double node_sum = 0.0;
    std::optional<Cost> best;
    for (const auto& t : output.trials) {
      proven += t.optimal_proven ? 1 : 0;
      truncated += t.truncated ? 1 : 0;
      with_optimum += t.optimum ? 1 : 0;
      node_sum += static_cast<double>(t.nodes_generated);
      if (t.best_cost && (!best || *t.best_cost < *best)) best = *t.best_cost;
    }
    std::ofstream out(output.out_dir / "summary.txt");
    out << "domain=" << to_string(config.domain) << '\n';
    out << "algorithm=" << to_string(config.algorithm) << '\n';
    out << "config_hash=" << config_hash(config) << '\n';
    out << "trials=" << config.trials << '\n';
    out << "proven=" << proven << '\n';
    out << "truncated=" << truncated << '\n';
    out << "mean_nodes_generated="
        << csv::format_number(node_sum / static_cast<double>(config.trials)) << '\n';
    out << "best_cost=" << (best ? csv::format_number(*best) : "none") << '\n';
    if (config.profiles) out << "optima_available=" << with_optimum << '\n';
  }
  return output;
}

// First-dive audit for trial 0 of the configured experiment.
inline std::string first_dive_summary(const ExperimentConfig& config,
                                      const std::vector<double>& quantile_ps) {
  return detail::with_problem(config, detail::trial_seed(config, 0),
                              [&](const auto& problem) {
                                auto dive = collect_first_dive(problem);
                                return sample_summary_csv(dive.sample, quantile_ps);
                              });
}

inline void write_sweep_csv(std::ostream& out, const std::vector<GrowthCell>& cells) {
  out << "p_zero,depth,trials,mean_bfs_nodes,mean_dfbnb_nodes,truncated_bfs,"
         "truncated_dfbnb\n";
  for (const auto& c : cells)
    csv::write_row(out, {csv::format_number(c.p_zero), std::to_string(c.depth),
                         std::to_string(c.trials), csv::format_number(c.mean_bfs_nodes),
                         csv::format_number(c.mean_dfbnb_nodes),
                         std::to_string(c.truncated_bfs), std::to_string(c.truncated_dfbnb)});
}

// Drops every column whose header names a wall time; the remaining text is
// what reproducibility comparisons look at.
inline std::string csv_without_wall_time(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  std::vector<std::size_t> keep;
  std::ostringstream out;
  bool header = true;
  while (std::getline(lines, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream cells(line);
    while (std::getline(cells, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (header) {
      for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i].find("wall_time") == std::string::npos) keep.push_back(i);
      header = false;
    }
    bool first = true;
    for (std::size_t i : keep) {
      if (!first) out << ',';
      if (i < fields.size()) out << fields[i];
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

// ---- verification harness ----------------------------------------------------

struct VerifySpec {
  std::uint32_t trees = 0;
  std::uint32_t atsps = 0;
  std::uint32_t stsps = 0;
  std::uint32_t maxsats = 0;
  std::uint64_t seed = 0;
  // instance shapes; tours stay within brute-force reach (n <= 9) and the
  // conditional bound audit exhausts 2^free assignments, so keep vars small
  std::uint32_t tree_depth = 5;
  std::uint32_t tree_branching = 3;
  std::uint32_t atsp_cities = 6;
  std::uint32_t stsp_cities = 6;
  std::uint32_t sat_vars = 8;
  std::uint32_t sat_clauses = 28;
  // multiplies every increment the searches see; > 1 plants inadmissible
  // bounds that the checker must catch (a self-test of the harness)
  double bound_fault = 1.0;
};

struct Violation {
  std::string domain;
  std::uint64_t seed = 0;
  std::string what;
};

namespace detail {

template <SearchProblem P>
class BoundFaultProblem {
 public:
  using State = typename P::State;

  BoundFaultProblem(const P& base, double factor) : base_(&base), factor_(factor) {}

  State root() const { return base_->root(); }
  bool is_goal(const State& s) const { return base_->is_goal(s); }
  Cost original_cost(const State& s) const { return base_->original_cost(s); }
  std::vector<Child<State>> expand(const State& s) const {
    auto children = base_->expand(s);
    for (auto& c : children) c.increment *= factor_;
    return children;
  }

 private:
  const P* base_;
  double factor_;
};

// The same space re-rooted at one of its states; lets the checker enumerate
// exactly the solutions below an expanded node.
template <SearchProblem P>
struct RootedProblem {
  using State = typename P::State;
  const P* base;
  State start;

  State root() const { return start; }
  bool is_goal(const State& s) const { return base->is_goal(s); }
  Cost original_cost(const State& s) const { return base->original_cost(s); }
  std::vector<Child<State>> expand(const State& s) const { return base->expand(s); }
};

struct VerifyContext {
  std::vector<Violation>* violations;
  std::string domain;
  std::uint64_t seed = 0;

  void flag(const std::string& what) const {
    violations->push_back({domain, seed, what});
  }
};

inline constexpr double kVerifySlack = 1e-6;

// Checks proven-optimal claims of each exact algorithm against the oracle
// value, lower-bounds the approximate ones, and audits conditional bound
// admissibility at every node dfbnb and best-first expand.
template <SearchProblem P, typename BoundCheck>
void verify_against_oracle(const P& problem, Cost oracle, const VerifyContext& ctx,
                           double bound_fault, const BoundCheck& conditional_optimum) {
  BoundFaultProblem<P> faulted(problem, bound_fault);

  const ExpandObserver<typename P::State> audit = [&](const typename P::State& s, Cost g,
                                                      std::uint32_t) {
    std::optional<Cost> limit = conditional_optimum(s);
    if (limit && g > *limit + kVerifySlack) {
      std::ostringstream what;
      what << "bound " << g << " above conditional optimum " << *limit;
      ctx.flag(what.str());
    }
  };

  auto df = dfbnb(faulted, {}, audit);
  if (!df.optimal_proven)
    ctx.flag("dfbnb failed to prove an optimum");
  else if (std::abs(*df.best_cost - oracle) > kVerifySlack) {
    std::ostringstream what;
    what << "dfbnb best " << *df.best_cost << " != oracle " << oracle;
    ctx.flag(what.str());
  }

  auto bf = best_first_search(faulted, {}, audit);
  if (!bf.optimal_proven)
    ctx.flag("best-first failed to prove an optimum");
  else if (bound_fault == 1.0 && std::abs(*bf.best_cost - oracle) > kVerifySlack) {
    std::ostringstream what;
    what << "best-first best " << *bf.best_cost << " != oracle " << oracle;
    ctx.flag(what.str());
  }

  for (auto* iterative : {&iterative_epsilon_dfbnb<BoundFaultProblem<P>>,
                          &iterative_delta_dfbnb<BoundFaultProblem<P>>}) {
    auto it = (*iterative)(faulted, {});
    if (!it.result.optimal_proven)
      ctx.flag("iterative driver failed to prove an optimum");
    else if (std::abs(*it.result.best_cost - oracle) > kVerifySlack) {
      std::ostringstream what;
      what << "iterative best " << *it.result.best_cost << " != oracle " << oracle;
      ctx.flag(what.str());
    }
  }

  {
    auto dive = collect_first_dive(faulted);
    Cost eps = dive.sample.empty() ? 0.0 : epsilon_star(dive.sample).value;
    auto er = dfbnb(epsilon_wrap(faulted, EpsilonPolicy{eps}));
    if (!er.best_cost)
      ctx.flag("reduced dfbnb found no solution in a solvable space");
    else if (*er.best_cost < oracle - kVerifySlack) {
      std::ostringstream what;
      what << "reduced dfbnb reported " << *er.best_cost << " below oracle " << oracle;
      ctx.flag(what.str());
    }
  }
}

}  // namespace detail

// Small-instance audit of every search algorithm against brute-force oracles.
// Returns one entry per broken promise; empty means the suite is clean.
inline std::vector<Violation> verify_suite(const VerifySpec& spec) {
  if (spec.trees + spec.atsps + spec.stsps + spec.maxsats == 0)
    throw argument_error("verify suite is empty");
  if (spec.atsps > 0 && (spec.atsp_cities < 3 || spec.atsp_cities > 9))
    throw argument_error("verify: atsp_cities outside brute-force range [3, 9]");
  if (spec.stsps > 0 && (spec.stsp_cities < 3 || spec.stsp_cities > 9))
    throw argument_error("verify: stsp_cities outside brute-force range [3, 9]");
  if (spec.maxsats > 0 && (spec.sat_vars == 0 || spec.sat_vars > 20))
    throw argument_error("verify: sat_vars outside brute-force range [1, 20]");

  std::vector<Violation> violations;

  for (std::uint32_t i = 0; i < spec.trees; ++i) {
    const std::uint64_t seed = mix_key(spec.seed, i);
    TreeSpec tree_spec{spec.tree_depth, BranchingDistribution::fixed(spec.tree_branching),
                       EdgeCostDistribution::uniform_int(0, 9), seed};
    TreeProblem problem(tree_spec);
    auto stats = enumerate_space(problem);
    if (!stats.min_goal_original) continue;
    detail::VerifyContext ctx{&violations, "tree", seed};
    detail::verify_against_oracle(
        problem, *stats.min_goal_original, ctx, spec.bound_fault,
        [&](const TreeProblem::State& s) -> std::optional<Cost> {
          detail::RootedProblem<TreeProblem> sub{&problem, s};
          return enumerate_space(sub).min_goal_g;
        });
  }

  for (std::uint32_t i = 0; i < spec.atsps; ++i) {
    const std::uint64_t seed = mix_key(spec.seed, i);
    AtspInstance instance =
        generate_atsp(spec.atsp_cities, AtspCostModel::uniform_range(40), seed);
    AtspProblem problem(instance);
    auto oracle = brute_force_atsp(instance);
    if (!oracle) continue;
    detail::VerifyContext ctx{&violations, "atsp", seed};
    detail::verify_against_oracle(
        problem, static_cast<Cost>(*oracle), ctx, spec.bound_fault,
        [&](const AtspState& s) -> std::optional<Cost> {
          auto best = brute_force_atsp(instance, s.included, s.excluded);
          if (!best) return std::nullopt;
          return static_cast<Cost>(*best);
        });
    auto record = local_search_baseline(instance, 4000, seed);
    for (const auto& e : record.events)
      if (e.cost < static_cast<Cost>(*oracle) - detail::kVerifySlack) {
        std::ostringstream what;
        what << "local search reported " << e.cost << " below oracle " << *oracle;
        ctx.flag(what.str());
      }
  }

  for (std::uint32_t i = 0; i < spec.stsps; ++i) {
    const std::uint64_t seed = mix_key(spec.seed, i);
    StspInstance instance = generate_stsp(spec.stsp_cities, 50, seed);
    StspProblem problem(instance);
    auto oracle = brute_force_stsp(instance);
    if (!oracle) continue;
    detail::VerifyContext ctx{&violations, "stsp", seed};
    detail::verify_against_oracle(
        problem, static_cast<Cost>(*oracle), ctx, spec.bound_fault,
        [&](const StspState& s) -> std::optional<Cost> {
          auto best = brute_force_stsp(instance, s.required, s.forbidden);
          if (!best) return std::nullopt;
          return static_cast<Cost>(*best);
        });
  }

  for (std::uint32_t i = 0; i < spec.maxsats; ++i) {
    const std::uint64_t seed = mix_key(spec.seed, i);
    CnfInstance instance = generate_3sat(spec.sat_vars, spec.sat_clauses, seed);
    SatProblem problem(instance);
    Cost oracle = static_cast<Cost>(max_sat_optimum_bruteforce(instance));
    detail::VerifyContext ctx{&violations, "maxsat", seed};
    detail::verify_against_oracle(
        problem, oracle, ctx, spec.bound_fault,
        [&](const SatState& s) -> std::optional<Cost> {
          // exhaust the unassigned suffix for the exact conditional optimum
          std::vector<std::uint32_t> free_vars;
          for (std::uint32_t v = 0; v < instance.num_vars; ++v)
            if (s.assignment[v] < 0) free_vars.push_back(v);
          auto full = s.assignment;
          auto best = static_cast<std::uint32_t>(instance.clauses.size());
          for (std::uint64_t bits = 0; bits < (1ull << free_vars.size()); ++bits) {
            for (std::size_t k = 0; k < free_vars.size(); ++k)
              full[free_vars[k]] = (bits >> k) & 1 ? 1 : 0;
            best = std::min(best, scan_clauses(instance, full).falsified);
          }
          return static_cast<Cost>(best);
        });
  }

  return violations;
}

}  // namespace anybnb

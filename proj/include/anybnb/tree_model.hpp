#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "anybnb/core.hpp"
#include "anybnb/rng.hpp"
#include "anybnb/search.hpp"

namespace anybnb {

// Number of children per expanded node. "poisson" is shifted by one so that
// every internal node has at least one child: 1 + Poisson(mean - 1).
struct BranchingDistribution {
  enum class Kind { fixed, poisson };
  Kind kind = Kind::fixed;
  double mean = 2.0;

  static BranchingDistribution fixed(std::uint32_t b) {
    return {Kind::fixed, static_cast<double>(b)};
  }
  static BranchingDistribution poisson(double mean) { return {Kind::poisson, mean}; }

  double mean_children() const { return mean; }

  std::uint32_t sample(SplitMix64& rng) const {
    if (kind == Kind::fixed) return static_cast<std::uint32_t>(mean);
    return 1 + rng.next_poisson(mean - 1.0);
  }

  void validate() const {
    if (!(mean > 1.0)) throw config_error("mean branching must exceed 1");
    if (kind == Kind::fixed && mean != std::floor(mean))
      throw config_error("fixed branching must be an integer");
  }

  std::string to_string() const {
    std::ostringstream out;
    if (kind == Kind::fixed)
      out << "fixed:" << static_cast<std::uint64_t>(mean);
    else
      out << "poisson:" << mean;
    return out.str();
  }

  static BranchingDistribution parse(const std::string& text);
};

struct EdgeCostDistribution {
  enum class Kind { uniform_int, discrete };
  Kind kind = Kind::uniform_int;
  std::int64_t lo = 0, hi = 1;       // uniform_int, inclusive
  std::vector<Cost> values;          // discrete
  std::vector<double> probabilities;

  static EdgeCostDistribution uniform_int(std::int64_t lo, std::int64_t hi) {
    EdgeCostDistribution d;
    d.kind = Kind::uniform_int;
    d.lo = lo;
    d.hi = hi;
    return d;
  }
  static EdgeCostDistribution discrete(std::vector<Cost> values,
                                       std::vector<double> probabilities) {
    EdgeCostDistribution d;
    d.kind = Kind::discrete;
    d.values = std::move(values);
    d.probabilities = std::move(probabilities);
    return d;
  }
  // the two-point {0, 1} distribution used throughout the growth experiments
  static EdgeCostDistribution zero_one(double p_zero) {
    return discrete({0.0, 1.0}, {p_zero, 1.0 - p_zero});
  }

  double p_zero() const {
    if (kind == Kind::uniform_int)
      return lo == 0 ? 1.0 / static_cast<double>(hi - lo + 1) : 0.0;
    double p = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] == 0.0) p += probabilities[i];
    return p;
  }

  Cost max_value() const {
    if (kind == Kind::uniform_int) return static_cast<Cost>(hi);
    Cost m = 0.0;
    for (Cost v : values) m = std::max(m, v);
    return m;
  }

  Cost sample(SplitMix64& rng) const {
    if (kind == Kind::uniform_int) return static_cast<Cost>(rng.next_int(lo, hi));
    double u = rng.next_unit();
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      acc += probabilities[i];
      if (u < acc) return values[i];
    }
    return values.back();  // guards rounding in the cumulative sum
  }

  void validate() const {
    if (kind == Kind::uniform_int) {
      if (lo < 0 || hi < lo) throw config_error("uniform cost range must be 0 <= lo <= hi");
      return;
    }
    if (values.empty() || values.size() != probabilities.size())
      throw config_error("discrete cost distribution needs matching values/probabilities");
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 0.0) throw config_error("edge costs must be nonnegative");
      if (probabilities[i] <= 0.0) throw config_error("probabilities must be positive");
      sum += probabilities[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) throw config_error("probabilities must sum to 1");
  }

  std::string to_string() const;
  static EdgeCostDistribution parse(const std::string& text);
};

// A seeded random tree: goals live at depth `depth`, node cost is the sum of
// edge costs from the root.
struct TreeSpec {
  std::uint32_t depth = 1;
  BranchingDistribution branching;
  EdgeCostDistribution edge_cost;
  std::uint64_t seed = 0;

  void validate() const {
    if (depth < 1) throw config_error("tree depth must be at least 1");
    branching.validate();
    edge_cost.validate();
  }
};

// Expected number of zero-increment children per node; the quantity whose
// crossing of 1 flips the search-growth regime.
inline double expected_same_cost_children(const TreeSpec& spec) {
  return spec.branching.mean_children() * spec.edge_cost.p_zero();
}

class TreeProblem {
 public:
  struct State {
    std::vector<std::uint32_t> path;
    Cost node_cost = 0.0;
    std::uint64_t rng_key = 0;
  };

  explicit TreeProblem(TreeSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

  State root() const { return State{{}, 0.0, mix_key(spec_.seed, 0x7ee5u)}; }

  bool is_goal(const State& s) const { return s.path.size() == spec_.depth; }

  Cost original_cost(const State& s) const { return s.node_cost; }

  // Draws are keyed by the node's own substream, so the same children come
  // back no matter when or how often a node is expanded.
  std::vector<Child<State>> expand(const State& s) const {
    std::vector<Child<State>> children;
    if (is_goal(s)) return children;
    SplitMix64 rng(s.rng_key);
    std::uint32_t count = spec_.branching.sample(rng);
    children.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      Cost increment = spec_.edge_cost.sample(rng);
      State child;
      child.path = s.path;
      child.path.push_back(i);
      child.node_cost = s.node_cost + increment;
      child.rng_key = mix_key(s.rng_key, i + 1);
      children.push_back(Child<State>{std::move(child), increment});
    }
    return children;
  }

  const TreeSpec& spec() const { return spec_; }

 private:
  TreeSpec spec_;
};

inline TreeProblem make_tree(const TreeSpec& spec) { return TreeProblem(spec); }

// ---- growth sweep over (p0, depth) cells ----------------------------------

struct GrowthCell {
  double p_zero = 0.0;
  std::uint32_t depth = 0;
  std::uint64_t trials = 0;
  double mean_bfs_nodes = 0.0;
  double mean_dfbnb_nodes = 0.0;
  std::uint64_t truncated_bfs = 0;
  std::uint64_t truncated_dfbnb = 0;
};

struct SweepSettings {
  std::uint32_t branching = 2;
  std::vector<double> p_zeros;
  std::vector<std::uint32_t> depths;
  std::uint64_t trials = 300;
  std::uint64_t seed = 0;
  std::uint64_t node_budget = 8'000'000;  // per search; truncations are flagged per cell
};

inline std::vector<GrowthCell> sweep_phase_transition(const SweepSettings& settings) {
  if (settings.trials == 0) throw argument_error("sweep needs at least one trial");
  if (settings.p_zeros.empty() || settings.depths.empty())
    throw argument_error("sweep needs a nonempty (p0, depth) grid");

  std::vector<GrowthCell> cells;
  for (std::size_t pi = 0; pi < settings.p_zeros.size(); ++pi) {
    double p0 = settings.p_zeros[pi];
    for (std::uint32_t d : settings.depths) {
      GrowthCell cell;
      cell.p_zero = p0;
      cell.depth = d;
      cell.trials = settings.trials;
      std::uint64_t bfs_sum = 0, dfbnb_sum = 0;
      for (std::uint64_t trial = 0; trial < settings.trials; ++trial) {
        TreeSpec spec;
        spec.depth = d;
        spec.branching = BranchingDistribution::fixed(settings.branching);
        spec.edge_cost = EdgeCostDistribution::zero_one(p0);
        spec.seed = mix_key(mix_key(settings.seed, pi), mix_key(d, trial));
        TreeProblem tree(spec);

        SearchOptions options;
        options.node_budget = settings.node_budget;
        auto bfs = best_first_search(tree, options);
        auto dfs = dfbnb(tree, options);
        bfs_sum += bfs.nodes_generated;
        dfbnb_sum += dfs.nodes_generated;
        if (bfs.truncated) ++cell.truncated_bfs;
        if (dfs.truncated) ++cell.truncated_dfbnb;
      }
      cell.mean_bfs_nodes = static_cast<double>(bfs_sum) / static_cast<double>(settings.trials);
      cell.mean_dfbnb_nodes =
          static_cast<double>(dfbnb_sum) / static_cast<double>(settings.trials);
      cells.push_back(cell);
    }
  }
  return cells;
}

// ---- least-squares fits for growth curves ----------------------------------

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double sse = 0.0;
};

inline LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw argument_error("least squares needs two or more (x, y) pairs");
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw argument_error("least squares needs distinct x values");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.sse += r * r;
  }
  return fit;
}

// Compares growth models on (depth, mean nodes) data in log space:
// exponential fits log N ~ a + b d, polynomial fits log N ~ a + k log d.
struct GrowthFits {
  LinearFit exponential;  // slope = log of the per-level growth factor
  LinearFit power;        // slope = the polynomial degree
};

inline GrowthFits fit_growth(const std::vector<double>& depths,
                             const std::vector<double>& mean_nodes) {
  if (depths.size() != mean_nodes.size() || depths.size() < 3)
    throw argument_error("growth fit needs three or more cells");
  std::vector<double> log_n, d, log_d;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (mean_nodes[i] <= 0.0 || depths[i] <= 0.0)
      throw argument_error("growth fit needs positive depths and node counts");
    d.push_back(depths[i]);
    log_d.push_back(std::log(depths[i]));
    log_n.push_back(std::log(mean_nodes[i]));
  }
  return GrowthFits{least_squares(d, log_n), least_squares(log_d, log_n)};
}

// ---- config-block round trip ------------------------------------------------

inline BranchingDistribution BranchingDistribution::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw config_error("branching: expected kind:mean");
  std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  try {
    if (kind == "fixed")
      return BranchingDistribution::fixed(static_cast<std::uint32_t>(std::stoul(rest)));
    if (kind == "poisson") return BranchingDistribution::poisson(std::stod(rest));
  } catch (const std::exception&) {
    throw config_error("branching: bad numeric value in '" + text + "'");
  }
  throw config_error("branching: unknown kind '" + kind + "'");
}

inline std::string EdgeCostDistribution::to_string() const {
  std::ostringstream out;
  if (kind == Kind::uniform_int) {
    out << "uniform_int:" << lo << ":" << hi;
  } else {
    out << "discrete:";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out << ",";
      out << values[i] << "=" << probabilities[i];
    }
  }
  return out.str();
}

inline EdgeCostDistribution EdgeCostDistribution::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw config_error("cost_dist: expected kind:params");
  std::string kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  try {
    if (kind == "uniform_int") {
      auto second = rest.find(':');
      if (second == std::string::npos) throw config_error("uniform_int: expected lo:hi");
      return EdgeCostDistribution::uniform_int(std::stoll(rest.substr(0, second)),
                                               std::stoll(rest.substr(second + 1)));
    }
    if (kind == "discrete") {
      std::vector<Cost> values;
      std::vector<double> probabilities;
      std::istringstream items(rest);
      std::string item;
      while (std::getline(items, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw config_error("discrete: expected value=prob");
        values.push_back(std::stod(item.substr(0, eq)));
        probabilities.push_back(std::stod(item.substr(eq + 1)));
      }
      return EdgeCostDistribution::discrete(std::move(values), std::move(probabilities));
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("cost_dist: bad numeric value in '" + text + "'");
  }
  throw config_error("cost_dist: unknown kind '" + kind + "'");
}

inline std::string tree_spec_to_config(const TreeSpec& spec) {
  std::ostringstream out;
  out << "depth=" << spec.depth << "\n";
  out << "branching=" << spec.branching.to_string() << "\n";
  out << "cost_dist=" << spec.edge_cost.to_string() << "\n";
  out << "seed=" << spec.seed << "\n";
  return out.str();
}

inline TreeSpec parse_tree_spec(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("tree spec: expected key=value lines");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* key : {"depth", "branching", "cost_dist", "seed"})
    if (!kv.count(key)) throw config_error(std::string("tree spec: missing ") + key);
  TreeSpec spec;
  try {
    spec.depth = static_cast<std::uint32_t>(std::stoul(kv["depth"]));
    spec.seed = std::stoull(kv["seed"]);
  } catch (const std::exception&) {
    throw config_error("tree spec: bad numeric depth or seed");
  }
  spec.branching = BranchingDistribution::parse(kv["branching"]);
  spec.edge_cost = EdgeCostDistribution::parse(kv["cost_dist"]);
  spec.validate();
  return spec;
}

}  // namespace anybnb

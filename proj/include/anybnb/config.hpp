#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "anybnb/atsp.hpp"
#include "anybnb/core.hpp"
#include "anybnb/csv.hpp"
#include "anybnb/tree_model.hpp"

namespace anybnb {

enum class Domain { tree, atsp, stsp, maxsat };
enum class Algorithm { bfs, dfbnb, eps_dfbnb, iter_eps_dfbnb, iter_delta_dfbnb, local_search };

inline std::string to_string(Domain d) {
  switch (d) {
    case Domain::tree: return "tree";
    case Domain::atsp: return "atsp";
    case Domain::stsp: return "stsp";
    case Domain::maxsat: return "maxsat";
  }
  throw std::logic_error("unreachable domain");
}

inline Domain parse_domain(const std::string& text) {
  if (text == "tree") return Domain::tree;
  if (text == "atsp") return Domain::atsp;
  if (text == "stsp") return Domain::stsp;
  if (text == "maxsat") return Domain::maxsat;
  throw config_error("unknown domain: " + text);
}

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::bfs: return "bfs";
    case Algorithm::dfbnb: return "dfbnb";
    case Algorithm::eps_dfbnb: return "eps_dfbnb";
    case Algorithm::iter_eps_dfbnb: return "iter_eps_dfbnb";
    case Algorithm::iter_delta_dfbnb: return "iter_delta_dfbnb";
    case Algorithm::local_search: return "local_search";
  }
  throw std::logic_error("unreachable algorithm");
}

inline Algorithm parse_algorithm(const std::string& text) {
  if (text == "bfs") return Algorithm::bfs;
  if (text == "dfbnb") return Algorithm::dfbnb;
  if (text == "eps_dfbnb") return Algorithm::eps_dfbnb;
  if (text == "iter_eps_dfbnb") return Algorithm::iter_eps_dfbnb;
  if (text == "iter_delta_dfbnb") return Algorithm::iter_delta_dfbnb;
  if (text == "local_search") return Algorithm::local_search;
  throw config_error("unknown algorithm: " + text);
}

inline std::string atsp_model_to_string(const AtspCostModel& model) {
  if (model.kind == AtspCostModel::Kind::i_times_j) return "i_times_j";
  return "uniform:" + std::to_string(model.high);
}

inline AtspCostModel parse_atsp_model(const std::string& text) {
  if (text == "i_times_j") return AtspCostModel::i_times_j();
  if (text.rfind("uniform:", 0) == 0) {
    try {
      return AtspCostModel::uniform_range(std::stoll(text.substr(8)));
    } catch (const argument_error&) {
      throw;
    } catch (const std::exception&) {
      throw config_error("bad uniform bound in atsp model: " + text);
    }
  }
  throw config_error("unknown atsp cost model: " + text);
}

struct ExperimentConfig {
  Domain domain = Domain::tree;
  Algorithm algorithm = Algorithm::dfbnb;
  std::uint32_t trials = 1;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;            // node generations; 0 = unlimited
  std::vector<std::uint64_t> budgets;  // profile grid; empty = derive from runs
  bool profiles = false;
  std::string out = "results";

  // tree instances; the per-trial seed overrides tree.seed
  TreeSpec tree = {12, BranchingDistribution::fixed(5),
                   EdgeCostDistribution::uniform_int(0, 65535), 0};
  // atsp / stsp instances
  std::uint32_t cities = 10;
  AtspCostModel atsp_model = AtspCostModel::i_times_j();
  std::int64_t cost_high = 65535;
  // maxsat instances
  std::uint32_t num_vars = 30;
  std::uint32_t num_clauses = 450;

  // reduction knobs
  double epsilon = -1.0;  // eps_dfbnb; negative = estimate eps* from the dive
  double halving_factor = 2.0;
  double quantile_step = 0.1;
  bool rescue = true;
  bool reestimate = false;
  bool exact_final = true;

  std::uint64_t optimum_node_cap = 50'000'000;

  void validate() const {
    if (trials == 0) throw argument_error("trials must be positive");
    switch (domain) {
      case Domain::tree:
        tree.validate();
        break;
      case Domain::atsp:
        if (cities < 3) throw argument_error("atsp needs at least 3 cities");
        break;
      case Domain::stsp:
        if (cities < 3) throw argument_error("stsp needs at least 3 cities");
        if (cost_high < 0) throw argument_error("cost bound must be non-negative");
        break;
      case Domain::maxsat:
        if (num_vars < 3) throw argument_error("3-sat needs at least 3 variables");
        if (num_clauses == 0) throw argument_error("need at least one clause");
        break;
    }
    if (algorithm == Algorithm::local_search) {
      if (domain != Domain::atsp)
        throw argument_error("local search is an atsp baseline");
      if (budget == 0) throw argument_error("local search needs a budget");
    }
    for (std::size_t i = 1; i < budgets.size(); ++i)
      if (budgets[i] <= budgets[i - 1])
        throw argument_error("profile budgets must be strictly ascending");
    if (!budgets.empty() && budgets.front() == 0)
      throw argument_error("profile budgets must be positive");
  }
};

namespace detail {

inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace detail

// One key=value line per field, fixed order: the exact reproduction recipe.
inline std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "domain=" << to_string(config.domain) << '\n';
  out << "algorithm=" << to_string(config.algorithm) << '\n';
  out << "trials=" << config.trials << '\n';
  out << "seed=" << config.seed << '\n';
  out << "budget=" << config.budget << '\n';
  out << "budgets=";
  if (config.budgets.empty()) {
    out << "auto";
  } else {
    for (std::size_t i = 0; i < config.budgets.size(); ++i) {
      if (i) out << ',';
      out << config.budgets[i];
    }
  }
  out << '\n';
  out << "profiles=" << (config.profiles ? "true" : "false") << '\n';
  out << "depth=" << config.tree.depth << '\n';
  out << "branching=" << config.tree.branching.to_string() << '\n';
  out << "cost_dist=" << config.tree.edge_cost.to_string() << '\n';
  out << "cities=" << config.cities << '\n';
  out << "atsp_model=" << atsp_model_to_string(config.atsp_model) << '\n';
  out << "cost_high=" << config.cost_high << '\n';
  out << "num_vars=" << config.num_vars << '\n';
  out << "num_clauses=" << config.num_clauses << '\n';
  out << "epsilon=" << detail::format_double(config.epsilon) << '\n';
  out << "halving_factor=" << detail::format_double(config.halving_factor) << '\n';
  out << "quantile_step=" << detail::format_double(config.quantile_step) << '\n';
  out << "rescue=" << (config.rescue ? "true" : "false") << '\n';
  out << "reestimate=" << (config.reestimate ? "true" : "false") << '\n';
  out << "exact_final=" << (config.exact_final ? "true" : "false") << '\n';
  out << "optimum_node_cap=" << config.optimum_node_cap << '\n';
  out << "out=" << config.out << '\n';
  return out.str();
}

inline ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("config: expected key=value lines");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }

  ExperimentConfig config;
  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string value = it->second;
    kv.erase(it);
    return value;
  };
  auto parse_u64 = [](const std::string& value, const char* key) -> std::uint64_t {
    try {
      return std::stoull(value);
    } catch (const std::exception&) {
      throw config_error(std::string("config: bad number for ") + key);
    }
  };
  auto parse_f64 = [](const std::string& value, const char* key) -> double {
    try {
      return std::stod(value);
    } catch (const std::exception&) {
      throw config_error(std::string("config: bad number for ") + key);
    }
  };
  auto parse_bool = [](const std::string& value, const char* key) -> bool {
    if (value == "true") return true;
    if (value == "false") return false;
    throw config_error(std::string("config: expected true/false for ") + key);
  };

  if (auto v = take("domain")) config.domain = parse_domain(*v);
  if (auto v = take("algorithm")) config.algorithm = parse_algorithm(*v);
  if (auto v = take("trials"))
    config.trials = static_cast<std::uint32_t>(parse_u64(*v, "trials"));
  if (auto v = take("seed")) config.seed = parse_u64(*v, "seed");
  if (auto v = take("budget")) config.budget = parse_u64(*v, "budget");
  if (auto v = take("budgets")) {
    config.budgets.clear();
    if (*v != "auto" && !v->empty()) {
      std::istringstream items(*v);
      std::string item;
      while (std::getline(items, item, ','))
        config.budgets.push_back(parse_u64(item, "budgets"));
    }
  }
  if (auto v = take("profiles")) config.profiles = parse_bool(*v, "profiles");
  if (auto v = take("depth"))
    config.tree.depth = static_cast<std::uint32_t>(parse_u64(*v, "depth"));
  if (auto v = take("branching")) config.tree.branching = BranchingDistribution::parse(*v);
  if (auto v = take("cost_dist")) config.tree.edge_cost = EdgeCostDistribution::parse(*v);
  if (auto v = take("cities"))
    config.cities = static_cast<std::uint32_t>(parse_u64(*v, "cities"));
  if (auto v = take("atsp_model")) config.atsp_model = parse_atsp_model(*v);
  if (auto v = take("cost_high")) {
    try {
      config.cost_high = std::stoll(*v);
    } catch (const std::exception&) {
      throw config_error("config: bad number for cost_high");
    }
  }
  if (auto v = take("num_vars"))
    config.num_vars = static_cast<std::uint32_t>(parse_u64(*v, "num_vars"));
  if (auto v = take("num_clauses"))
    config.num_clauses = static_cast<std::uint32_t>(parse_u64(*v, "num_clauses"));
  if (auto v = take("epsilon")) config.epsilon = parse_f64(*v, "epsilon");
  if (auto v = take("halving_factor")) config.halving_factor = parse_f64(*v, "halving_factor");
  if (auto v = take("quantile_step")) config.quantile_step = parse_f64(*v, "quantile_step");
  if (auto v = take("rescue")) config.rescue = parse_bool(*v, "rescue");
  if (auto v = take("reestimate")) config.reestimate = parse_bool(*v, "reestimate");
  if (auto v = take("exact_final")) config.exact_final = parse_bool(*v, "exact_final");
  if (auto v = take("optimum_node_cap"))
    config.optimum_node_cap = parse_u64(*v, "optimum_node_cap");
  if (auto v = take("out")) config.out = *v;

  if (!kv.empty()) throw config_error("config: unknown key " + kv.begin()->first);
  return config;
}

// Stable identity of everything that shapes the results; the output path is
// presentation, not identity.
inline std::string config_hash(const ExperimentConfig& config) {
  std::string text = serialize_config(config);
  auto cut = text.rfind("out=");
  text.resize(cut);
  return csv::to_hex(csv::fnv1a64(text));
}

}  // namespace anybnb

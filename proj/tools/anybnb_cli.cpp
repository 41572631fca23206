// Command-line front end for the search toolkit: run experiments, audit the
// algorithms against brute-force oracles, sweep tree growth regimes, and
// inspect first-dive increment samples.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anybnb/bench.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw anybnb::io_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Flags override whatever the config file set; the file is optional.
void add_config_flags(CLI::App& cmd, anybnb::ExperimentConfig& config,
                      std::string& config_path, std::string& domain_text,
                      std::string& algorithm_text, std::string& branching_text,
                      std::string& cost_dist_text, std::string& atsp_model_text,
                      std::string& budgets_text) {
  cmd.add_option("--config", config_path, "experiment config file (key=value lines)");
  cmd.add_option("--domain", domain_text, "tree | atsp | stsp | maxsat");
  cmd.add_option("--algorithm", algorithm_text,
                 "bfs | dfbnb | eps_dfbnb | iter_eps_dfbnb | iter_delta_dfbnb | local_search");
  cmd.add_option("--trials", config.trials, "independent instances to run");
  cmd.add_option("--seed", config.seed, "master seed; trial i derives from it");
  cmd.add_option("--budget", config.budget, "node generation budget per trial; 0 = unlimited");
  cmd.add_option("--budgets", budgets_text, "profile grid, comma-separated, or 'auto'");
  cmd.add_flag("--profiles,!--no-profiles", config.profiles,
               "score solution quality against exact optima");
  cmd.add_option("--out", config.out, "output directory (env ANYBNB_OUT overrides the default)");
  cmd.add_option("--depth", config.tree.depth, "tree: goal depth");
  cmd.add_option("--branching", branching_text, "tree: fixed:<b> or poisson:<mean>");
  cmd.add_option("--cost-dist", cost_dist_text,
                 "tree: uniform_int:<lo>:<hi> or discrete:v@p,v@p,...");
  cmd.add_option("--cities", config.cities, "atsp/stsp: city count");
  cmd.add_option("--atsp-model", atsp_model_text, "atsp: i_times_j or uniform:<high>");
  cmd.add_option("--cost-high", config.cost_high, "stsp: edge costs drawn from {0..high}");
  cmd.add_option("--num-vars", config.num_vars, "maxsat: variable count");
  cmd.add_option("--num-clauses", config.num_clauses, "maxsat: clause count");
  cmd.add_option("--epsilon", config.epsilon,
                 "eps_dfbnb: zeroing threshold; negative = estimate from the first dive");
  cmd.add_option("--halving-factor", config.halving_factor,
                 "iter_eps_dfbnb: epsilon shrink factor per iteration");
  cmd.add_option("--quantile-step", config.quantile_step,
                 "iter_delta_dfbnb: quantile probability step per iteration");
  cmd.add_flag("--rescue,!--no-rescue", config.rescue,
               "delta reduction keeps the cheapest child at would-be dead ends");
  cmd.add_flag("--reestimate,!--no-reestimate", config.reestimate,
               "re-fit thresholds from increments observed in earlier iterations");
  cmd.add_flag("--exact-final,!--no-exact-final", config.exact_final,
               "iter_delta_dfbnb: finish with an unreduced pass");
  cmd.add_option("--optimum-node-cap", config.optimum_node_cap,
                 "abandon an optimum proof after this many generations");
}

anybnb::ExperimentConfig resolve_config(const std::string& config_path, CLI::App& cmd,
                                        const std::string& domain_text,
                                        const std::string& algorithm_text,
                                        const std::string& branching_text,
                                        const std::string& cost_dist_text,
                                        const std::string& atsp_model_text,
                                        const std::string& budgets_text,
                                        anybnb::ExperimentConfig flag_values) {
  anybnb::ExperimentConfig config;
  if (!config_path.empty()) config = anybnb::parse_config(read_file(config_path));

  const auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--domain")) config.domain = anybnb::parse_domain(domain_text);
  if (given("--algorithm")) config.algorithm = anybnb::parse_algorithm(algorithm_text);
  if (given("--trials")) config.trials = flag_values.trials;
  if (given("--seed")) config.seed = flag_values.seed;
  if (given("--budget")) config.budget = flag_values.budget;
  if (given("--budgets")) {
    config.budgets.clear();
    if (budgets_text != "auto") {
      std::istringstream items(budgets_text);
      std::string item;
      while (std::getline(items, item, ','))
        config.budgets.push_back(std::stoull(item));
    }
  }
  if (given("--profiles") || given("--no-profiles")) config.profiles = flag_values.profiles;
  if (given("--out")) config.out = flag_values.out;
  if (given("--depth")) config.tree.depth = flag_values.tree.depth;
  if (given("--branching"))
    config.tree.branching = anybnb::BranchingDistribution::parse(branching_text);
  if (given("--cost-dist"))
    config.tree.edge_cost = anybnb::EdgeCostDistribution::parse(cost_dist_text);
  if (given("--cities")) config.cities = flag_values.cities;
  if (given("--atsp-model")) config.atsp_model = anybnb::parse_atsp_model(atsp_model_text);
  if (given("--cost-high")) config.cost_high = flag_values.cost_high;
  if (given("--num-vars")) config.num_vars = flag_values.num_vars;
  if (given("--num-clauses")) config.num_clauses = flag_values.num_clauses;
  if (given("--epsilon")) config.epsilon = flag_values.epsilon;
  if (given("--halving-factor")) config.halving_factor = flag_values.halving_factor;
  if (given("--quantile-step")) config.quantile_step = flag_values.quantile_step;
  if (given("--rescue") || given("--no-rescue")) config.rescue = flag_values.rescue;
  if (given("--reestimate") || given("--no-reestimate"))
    config.reestimate = flag_values.reestimate;
  if (given("--exact-final") || given("--no-exact-final"))
    config.exact_final = flag_values.exact_final;
  if (given("--optimum-node-cap")) config.optimum_node_cap = flag_values.optimum_node_cap;

  if (!given("--out") && config_path.empty()) {
    if (const char* env_out = std::getenv("ANYBNB_OUT")) config.out = env_out;
  }
  return config;
}

int run_verb(const anybnb::ExperimentConfig& config) {
  auto output = anybnb::run_experiment(config);
  std::uint64_t proven = 0;
  for (const auto& t : output.trials) proven += t.optimal_proven ? 1 : 0;
  std::cout << "wrote " << output.out_dir.string() << ": " << output.trials.size()
            << " trials, " << proven << " proven optimal\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anytime branch-and-bound benchmark driver"};
  app.require_subcommand(1);

  // ---- run ----
  anybnb::ExperimentConfig flag_values;
  std::string config_path, domain_text, algorithm_text, branching_text, cost_dist_text,
      atsp_model_text, budgets_text;
  CLI::App* run = app.add_subcommand("run", "run an experiment and write its outputs");
  add_config_flags(*run, flag_values, config_path, domain_text, algorithm_text,
                   branching_text, cost_dist_text, atsp_model_text, budgets_text);

  // ---- verify ----
  anybnb::VerifySpec verify_spec;
  CLI::App* verify = app.add_subcommand(
      "verify", "audit every algorithm against brute-force oracles on small instances");
  verify->add_option("--trees", verify_spec.trees, "random tree instances");
  verify->add_option("--atsps", verify_spec.atsps, "asymmetric tsp instances");
  verify->add_option("--stsps", verify_spec.stsps, "symmetric tsp instances");
  verify->add_option("--maxsats", verify_spec.maxsats, "max-3-sat instances");
  verify->add_option("--seed", verify_spec.seed, "suite seed");
  verify->add_option("--bound-fault", verify_spec.bound_fault,
                     "increment multiplier; > 1 plants violations the audit must catch");

  // ---- sweep ----
  anybnb::SweepSettings sweep_settings;
  std::string sweep_out;
  std::vector<double> sweep_p0;
  std::vector<std::uint32_t> sweep_depths;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "measure search effort across zero-increment probabilities and depths");
  sweep->add_option("--branching", sweep_settings.branching, "fixed branching factor");
  sweep->add_option("--p0", sweep_p0, "zero-increment probabilities")
      ->required()
      ->delimiter(',');
  sweep->add_option("--depths", sweep_depths, "goal depths")->required()->delimiter(',');
  sweep->add_option("--trials", sweep_settings.trials, "trees per grid cell");
  sweep->add_option("--seed", sweep_settings.seed, "sweep seed");
  sweep->add_option("--node-budget", sweep_settings.node_budget,
                    "per-search truncation budget");
  sweep->add_option("--out", sweep_out, "CSV path; stdout when omitted");

  // ---- sample ----
  anybnb::ExperimentConfig sample_flags;
  std::string sample_config_path, sample_domain, sample_algorithm, sample_branching,
      sample_cost_dist, sample_atsp_model, sample_budgets;
  std::vector<double> sample_quantiles{0.1, 0.25, 0.5, 0.75, 0.9};
  CLI::App* sample = app.add_subcommand(
      "sample", "print the first-dive increment sample summary for one instance");
  add_config_flags(*sample, sample_flags, sample_config_path, sample_domain,
                   sample_algorithm, sample_branching, sample_cost_dist, sample_atsp_model,
                   sample_budgets);
  sample->add_option("--quantiles", sample_quantiles, "quantile probabilities to report")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_verb(resolve_config(config_path, *run, domain_text, algorithm_text,
                                     branching_text, cost_dist_text, atsp_model_text,
                                     budgets_text, flag_values));
    }
    if (verify->parsed()) {
      auto violations = anybnb::verify_suite(verify_spec);
      for (const auto& v : violations)
        std::cout << v.domain << ',' << v.seed << ',' << v.what << '\n';
      if (!violations.empty()) {
        std::cerr << violations.size() << " violation(s)\n";
        return 1;
      }
      std::cout << "ok\n";
      return 0;
    }
    if (sweep->parsed()) {
      sweep_settings.p_zeros = sweep_p0;
      sweep_settings.depths = sweep_depths;
      auto cells = anybnb::sweep_phase_transition(sweep_settings);
      if (sweep_out.empty()) {
        anybnb::write_sweep_csv(std::cout, cells);
      } else {
        std::ofstream out(sweep_out);
        if (!out) throw anybnb::io_error("cannot open " + sweep_out);
        anybnb::write_sweep_csv(out, cells);
        std::cout << "wrote " << sweep_out << '\n';
      }
      return 0;
    }
    if (sample->parsed()) {
      auto config = resolve_config(sample_config_path, *sample, sample_domain,
                                   sample_algorithm, sample_branching, sample_cost_dist,
                                   sample_atsp_model, sample_budgets, sample_flags);
      config.validate();
      std::cout << anybnb::first_dive_summary(config, sample_quantiles);
      return 0;
    }
  } catch (const anybnb::argument_error& e) {
    std::cerr << "argument error: " << e.what() << '\n';
    return 2;
  } catch (const anybnb::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

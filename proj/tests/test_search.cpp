#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "anybnb/search.hpp"
#include "helpers.hpp"

using namespace anybnb;
using anybnb::testing::ScriptedProblem;
using anybnb::testing::four_leaf_tree;

TEST_CASE("best-first search finds the cheapest leaf", "[search]") {
  auto tree = four_leaf_tree();
  auto result = best_first_search(tree);
  REQUIRE(result.best_cost.has_value());
  CHECK(*result.best_cost == 1.0);
  CHECK(*result.best_solution == "a1");
  CHECK(result.optimal_proven);
  CHECK_FALSE(result.truncated);
  CHECK(result.nodes_generated == 5);
  CHECK(result.nodes_expanded == 2);
  REQUIRE(result.anytime.events.size() == 1);
  CHECK(result.anytime.events[0].cost == 1.0);
  CHECK(result.anytime.events[0].nodes_generated == 5);
}

TEST_CASE("dfbnb dives to the cheap leaf and prunes the rest", "[search]") {
  auto tree = four_leaf_tree();
  auto result = dfbnb(tree);
  REQUIRE(result.best_cost.has_value());
  CHECK(*result.best_cost == 1.0);
  CHECK(*result.best_solution == "a1");
  CHECK(result.optimal_proven);
  CHECK(result.nodes_generated == 5);
  CHECK(result.nodes_expanded == 2);  // root and a; b is pruned at cost 2 >= 1
  REQUIRE(result.anytime.events.size() == 1);
  CHECK(result.anytime.events[0].cost == 1.0);
}

TEST_CASE("bfs ties break deeper-first then by path order", "[search]") {
  // all-zero costs: grandchild x00 must pop before the shallower sibling y
  ScriptedProblem tree(
      {
          {"", {{"x", 0.0}, {"y", 0.0}}},
          {"x", {{"x0", 0.0}}},
          {"x0", {{"x00", 0.0}}},
      },
      {"x00", "y"});
  std::vector<std::string> expansions;
  auto result = best_first_search(
      tree, {}, [&](const std::string& s, Cost, std::uint32_t) { expansions.push_back(s); });
  REQUIRE(result.best_cost.has_value());
  CHECK(*result.best_solution == "x00");
  CHECK(expansions == std::vector<std::string>{"", "x", "x0"});
}

TEST_CASE("a goal root terminates both searches at one node", "[search]") {
  ScriptedProblem tree({}, {""});
  for (auto result : {best_first_search(tree), dfbnb(tree)}) {
    REQUIRE(result.best_cost.has_value());
    CHECK(*result.best_cost == 0.0);
    CHECK(result.nodes_generated == 1);
    CHECK(result.optimal_proven);
    REQUIRE(result.anytime.events.size() == 1);
    CHECK(result.anytime.events[0].nodes_generated == 1);
  }
}

TEST_CASE("budgets truncate without an incumbent claim", "[search]") {
  auto tree = four_leaf_tree();
  SearchOptions options;
  options.node_budget = 3;

  auto bfs = best_first_search(tree, options);
  CHECK(bfs.truncated);
  CHECK_FALSE(bfs.optimal_proven);
  CHECK_FALSE(bfs.best_cost.has_value());

  auto dfs = dfbnb(tree, options);
  CHECK(dfs.truncated);
  CHECK_FALSE(dfs.optimal_proven);
  CHECK_FALSE(dfs.best_cost.has_value());
  CHECK(dfs.nodes_generated == 3);

  options.node_budget = 0;
  CHECK_THROWS_AS(best_first_search(tree, options), argument_error);
  CHECK_THROWS_AS(dfbnb(tree, options), argument_error);
}

TEST_CASE("dfbnb prunes at cost equal to the upper bound", "[search]") {
  auto tree = four_leaf_tree();
  SearchOptions options;
  options.initial_upper_bound = 1.0;  // exactly the optimum
  auto result = dfbnb(tree, options);
  CHECK_FALSE(result.best_cost.has_value());
  CHECK_FALSE(result.optimal_proven);
  CHECK(result.anytime.events.empty());

  options.initial_upper_bound = 1.5;
  result = dfbnb(tree, options);
  REQUIRE(result.best_cost.has_value());
  CHECK(*result.best_cost == 1.0);
  CHECK(result.optimal_proven);
}

TEST_CASE("dead ends backtrack cleanly", "[search]") {
  ScriptedProblem tree(
      {
          {"", {{"dead", 0.0}, {"live", 1.0}}},
          {"live", {{"goal", 0.0}}},
          // "dead" has no children and is not a goal
      },
      {"goal"});
  auto dfs = dfbnb(tree);
  REQUIRE(dfs.best_cost.has_value());
  CHECK(*dfs.best_cost == 1.0);
  CHECK(dfs.optimal_proven);

  auto bfs = best_first_search(tree);
  REQUIRE(bfs.best_cost.has_value());
  CHECK(*bfs.best_cost == 1.0);
}

TEST_CASE("a space without goals reports nothing found", "[search]") {
  ScriptedProblem tree({{"", {{"x", 1.0}}}}, {});
  for (auto result : {best_first_search(tree), dfbnb(tree)}) {
    CHECK_FALSE(result.best_cost.has_value());
    CHECK_FALSE(result.optimal_proven);
    CHECK_FALSE(result.truncated);
  }
}

TEST_CASE("the best-first memory cap raises a resource error", "[search]") {
  auto tree = four_leaf_tree();
  SearchOptions options;
  options.max_open_nodes = 2;
  CHECK_THROWS_AS(best_first_search(tree, options), resource_error);
}

TEST_CASE("dfbnb peak open count respects the linear-memory contract", "[search]") {
  auto tree = four_leaf_tree();
  auto result = dfbnb(tree);
  CHECK(result.peak_open_nodes <= 2 * (2 + 1));  // branching 2, depth 2
}

TEST_CASE("enumeration oracle reports goals, nodes, and minima", "[search]") {
  auto tree = four_leaf_tree();
  auto stats = enumerate_space(tree);
  CHECK(stats.nodes_generated == 7);
  CHECK(stats.goal_count == 4);
  REQUIRE(stats.min_goal_g.has_value());
  CHECK(*stats.min_goal_g == 1.0);
  CHECK(*stats.min_goal_original == 1.0);
  CHECK_THROWS_AS(enumerate_space(tree, 3), resource_error);
}

TEST_CASE("anytime records enforce strict improvement", "[search]") {
  AnytimeRecord record;
  record.append(10, 0.0, 5.0);
  CHECK_THROWS_AS(record.append(20, 0.0, 5.0), integrity_error);
  CHECK_THROWS_AS(record.append(5, 0.0, 4.0), integrity_error);
  record.append(20, 0.0, 3.0);
  CHECK(record.best_at(9) == std::nullopt);
  CHECK(record.best_at(10) == std::optional<Cost>(5.0));
  CHECK(record.best_at(100) == std::optional<Cost>(3.0));
}

TEST_CASE("counter offsets and shared clocks shift anytime events", "[search]") {
  auto tree = four_leaf_tree();
  SearchOptions options;
  options.node_counter_offset = 100;
  auto result = dfbnb(tree, options);
  REQUIRE(result.anytime.events.size() == 1);
  CHECK(result.anytime.events[0].nodes_generated == 105);
}

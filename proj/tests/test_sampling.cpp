#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "anybnb/sampling.hpp"
#include "anybnb/tree_model.hpp"
#include "helpers.hpp"

using namespace anybnb;
using anybnb::testing::ScriptedProblem;
using anybnb::testing::four_leaf_tree;

TEST_CASE("first dive on a binary depth-3 tree samples three expansions", "[sampling]") {
  TreeSpec spec;
  spec.depth = 3;
  spec.branching = BranchingDistribution::fixed(2);
  spec.edge_cost = EdgeCostDistribution::uniform_int(0, 9);
  spec.seed = 404;
  TreeProblem tree(spec);

  auto dive = collect_first_dive(tree);
  REQUIRE(dive.sample.sealed);
  // the dive expands root, one child, one grandchild, then visits a leaf
  CHECK(dive.sample.child_counts == std::vector<std::uint32_t>{2, 2, 2});
  CHECK(dive.sample.increments.size() == 6);
  CHECK(dive.sample.mean_branching() == 2.0);
  REQUIRE(dive.first_goal.has_value());
  CHECK(dive.first_goal->path.size() == 3);
  CHECK(dive.nodes_generated == 7);
  CHECK(dive.nodes_expanded == 3);
}

TEST_CASE("first dive follows ascending increments", "[sampling]") {
  auto tree = four_leaf_tree();
  auto dive = collect_first_dive(tree);
  REQUIRE(dive.sample.sealed);
  REQUIRE(dive.first_goal.has_value());
  CHECK(*dive.first_goal == "a1");  // cheapest child of the cheapest child
  CHECK(dive.first_goal_g == 1.0);
  CHECK(dive.sample.child_counts == std::vector<std::uint32_t>{2, 2});
  CHECK(dive.sample.increments == std::vector<Cost>{0.0, 1.0, 2.0, 2.0});  // sorted
  CHECK(dive.nodes_generated == 5);
}

TEST_CASE("first dive backtracks through dead ends", "[sampling]") {
  ScriptedProblem tree(
      {
          {"", {{"dead", 0.0}, {"live", 1.0}}},
          {"live", {{"goal", 0.5}}},
      },
      {"goal"});
  auto dive = collect_first_dive(tree);
  REQUIRE(dive.sample.sealed);
  REQUIRE(dive.first_goal.has_value());
  CHECK(*dive.first_goal == "goal");
  CHECK(dive.sample.child_counts == std::vector<std::uint32_t>{2, 0, 1});
  CHECK(dive.first_goal_g == 1.5);
}

TEST_CASE("a goal root seals an empty sample", "[sampling]") {
  ScriptedProblem tree({}, {""});
  auto dive = collect_first_dive(tree);
  REQUIRE(dive.sample.sealed);
  CHECK(dive.sample.empty());
  CHECK(dive.nodes_generated == 1);
  CHECK_THROWS_AS(epsilon_star(dive.sample), estimation_error);
}

TEST_CASE("an exhausted dive budget leaves the sample unsealed", "[sampling]") {
  TreeSpec spec;
  spec.depth = 5;
  spec.branching = BranchingDistribution::fixed(2);
  spec.edge_cost = EdgeCostDistribution::uniform_int(0, 9);
  spec.seed = 8;
  TreeProblem tree(spec);
  auto dive = collect_first_dive(tree, 4);
  CHECK_FALSE(dive.sample.sealed);
  CHECK_FALSE(dive.first_goal.has_value());
  CHECK_THROWS_AS(dive.sample.mean_branching(), estimation_error);
  CHECK_THROWS_AS(delta_at_quantile(dive.sample, 0.5), estimation_error);
}

TEST_CASE("epsilon_star meets the boundary at zero when zeros abound", "[sampling]") {
  auto sample = OnlineSample::from_data({0, 1, 2, 3}, {4});
  CHECK(sample.mean_branching() == 4.0);
  auto eps = epsilon_star(sample);
  CHECK(eps.value == 0.0);
  CHECK(eps.lambda_hat == 0.0);
}

TEST_CASE("epsilon_star inverts the empirical cdf at 1/b", "[sampling]") {
  SplitMix64 rng(2024);
  std::vector<Cost> increments;
  for (int i = 0; i < 200; ++i)
    increments.push_back(static_cast<Cost>(rng.next_int(1, 100)));
  auto sample = OnlineSample::from_data(increments, {2, 2, 2, 2});
  auto eps = epsilon_star(sample);

  // independent inversion: smallest sampled value whose cdf reaches 0.5
  std::sort(increments.begin(), increments.end());
  Cost expected = increments.back();
  for (Cost v : increments) {
    auto count = std::upper_bound(increments.begin(), increments.end(), v) -
                 increments.begin();
    if (2.0 * static_cast<double>(count) / 200.0 >= 1.0) {
      expected = v;
      break;
    }
  }
  CHECK(eps.value == expected);
  CHECK(eps.lambda_hat <= eps.value);
}

TEST_CASE("epsilon_star on a single-path sample returns the largest increment", "[sampling]") {
  auto one_path = OnlineSample::from_data({5, 3, 8}, {1, 1, 1});
  CHECK(epsilon_star(one_path).value == 8.0);

  auto shrinking = OnlineSample::from_data({2, 5}, {1, 0, 1});  // b_hat < 1
  CHECK(epsilon_star(shrinking).value == 5.0);
}

TEST_CASE("epsilon_star never drops when a large increment joins", "[sampling]") {
  SplitMix64 rng(31);
  for (int round = 0; round < 20; ++round) {
    std::vector<Cost> increments;
    for (int i = 0; i < 50; ++i)
      increments.push_back(static_cast<Cost>(rng.next_int(0, 30)));
    auto base = OnlineSample::from_data(increments, {3, 3});
    auto grown = increments;
    grown.push_back(1000.0);
    auto extended = OnlineSample::from_data(grown, {3, 3});
    CHECK(epsilon_star(extended).value >= epsilon_star(base).value);
  }
}

TEST_CASE("delta quantiles follow the left-continuous inversion", "[sampling]") {
  auto sample = OnlineSample::from_data({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {2});
  CHECK(delta_at_quantile(sample, 0.1) == 1.0);
  CHECK(delta_at_quantile(sample, 0.5) == 5.0);
  CHECK(delta_at_quantile(sample, 1.0) == 10.0);
  CHECK_THROWS_AS(delta_at_quantile(sample, 0.0), argument_error);
  CHECK_THROWS_AS(delta_at_quantile(sample, 1.5), argument_error);
}

TEST_CASE("delta quantiles are tight: achieving p and minimal", "[sampling]") {
  SplitMix64 rng(47);
  for (int round = 0; round < 20; ++round) {
    std::vector<Cost> increments;
    int n = 5 + static_cast<int>(rng.next_below(40));
    for (int i = 0; i < n; ++i)
      increments.push_back(static_cast<Cost>(rng.next_int(0, 12)));
    auto sample = OnlineSample::from_data(increments, {2});
    for (double p : {0.1, 0.3, 0.5, 0.9, 1.0}) {
      Cost value = delta_at_quantile(sample, p);
      CHECK(sample.empirical_cdf(value) >= p);
      // minimality: any strictly smaller sampled value misses p
      Cost below = -1.0;
      for (Cost v : sample.increments)
        if (v < value) below = v;
      if (below >= 0.0) CHECK(sample.empirical_cdf(below) < p);
    }
  }
}

TEST_CASE("sample summaries render one audit row", "[sampling]") {
  auto sample = OnlineSample::from_data({0, 1, 2, 3}, {4});
  auto text = sample_summary_csv(sample, {0.5, 1.0});
  CHECK(text ==
        "b_hat,sample_size,eps_star,lambda_hat,q_0.5,q_1\n"
        "4,4,0,0,1,3\n");
}

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "anybnb/search.hpp"
#include "anybnb/stsp.hpp"

using namespace anybnb;

namespace {

StspInstance unit_square() {
  StspInstance instance;
  instance.n = 4;
  instance.cost.assign(16, 1);
  for (std::uint32_t i = 0; i < 4; ++i) instance.cost[i * 4 + i] = 0;
  return instance;
}

// ring edges cost 1, chords cost 100
StspInstance ring(std::uint32_t n) {
  StspInstance instance;
  instance.n = n;
  instance.cost.assign(static_cast<std::size_t>(n) * n, 100);
  for (std::uint32_t i = 0; i < n; ++i) {
    instance.cost[i * n + i] = 0;
    std::uint32_t j = (i + 1) % n;
    instance.cost[i * n + j] = 1;
    instance.cost[j * n + i] = 1;
  }
  return instance;
}

}  // namespace

TEST_CASE("one tree of the unit square costs four", "[stsp]") {
  auto instance = unit_square();
  std::vector<double> pi(4, 0.0);
  auto tree = one_tree(instance, {}, {}, pi);
  REQUIRE(tree.has_value());
  CHECK(tree->value == 4.0);
  CHECK(tree->edges.size() == 4);
  int degree_total = 0;
  for (auto d : tree->degrees) degree_total += d;
  CHECK(degree_total == 8);
}

TEST_CASE("a ring's first one-tree is already the optimal tour", "[stsp]") {
  auto instance = ring(5);
  StspProblem problem(instance);
  auto root = problem.root();
  CHECK(problem.is_goal(root));
  CHECK(problem.original_cost(root) == 5.0);
}

TEST_CASE("held-karp stays below the optimum and above its first step", "[stsp]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto instance = generate_stsp(7, 100, seed);
    double greedy = StspProblem::greedy_tour_estimate(instance);
    auto full = held_karp_bound(instance, {}, {}, {}, greedy, 3);
    auto single = held_karp_bound(instance, {}, {}, {}, greedy, 1);
    auto optimum = brute_force_stsp(instance);
    REQUIRE(full.has_value());
    REQUIRE(optimum.has_value());
    CHECK(full->bound <= static_cast<double>(*optimum) + 1e-9);
    CHECK(full->bound >= single->bound - 1e-9);
  }
}

TEST_CASE("one-tree degrees always sum to twice the city count", "[stsp]") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto instance = generate_stsp(9, 50, seed);
    std::vector<double> pi(9, 0.0);
    auto tree = one_tree(instance, {}, {}, pi);
    REQUIRE(tree.has_value());
    int total = 0;
    for (auto d : tree->degrees) total += d;
    CHECK(total == 18);
  }
}

TEST_CASE("one tree detects infeasible constraint sets", "[stsp]") {
  auto instance = unit_square();
  std::vector<double> pi(4, 0.0);
  // all edges at city 2 forbidden: nothing can span it
  std::vector<Edge> cut{{0, 2}, {1, 2}, {2, 3}};
  CHECK_FALSE(one_tree(instance, {}, cut, pi).has_value());
  // three required edges at the special city
  std::vector<Edge> crowded{{0, 1}, {0, 2}, {0, 3}};
  CHECK_FALSE(one_tree(instance, crowded, {}, pi).has_value());
  // a required cycle away from the special city
  std::vector<Edge> cycle{{1, 2}, {2, 3}, {1, 3}};
  CHECK_FALSE(one_tree(instance, cycle, {}, pi).has_value());
  // required and forbidden overlap
  std::vector<Edge> both{{1, 2}};
  CHECK_FALSE(one_tree(instance, both, both, pi).has_value());
}

TEST_CASE("branch candidates follow the forbid-require ladder", "[stsp]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto instance = generate_stsp(8, 40, seed);
    StspProblem problem(instance);
    auto root = problem.root();
    if (problem.is_goal(root)) continue;
    auto branches = vj_children(instance, {}, {}, root.tree);
    REQUIRE(branches.size() >= 2);
    REQUIRE(branches.size() <= 3);
    REQUIRE(branches[0].forbidden.size() == 1);
    CHECK(branches[0].required.empty());
    Edge e1 = branches[0].forbidden[0];
    REQUIRE(branches[1].required.size() == 1);
    CHECK(branches[1].required[0] == e1);
    if (branches.size() == 3) {
      Edge e2 = branches[1].forbidden[0];
      REQUIRE(branches[2].required.size() == 2);
      CHECK(branches[2].required[0] == e1);
      CHECK(branches[2].required[1] == e2);
      // saturated branch city: every other edge there is ruled out
      CHECK(branches[2].forbidden.size() >= branches[0].forbidden.size());
    }
  }
}

TEST_CASE("branching a tour node is a contract violation", "[stsp]") {
  auto instance = ring(5);
  StspProblem problem(instance);
  auto root = problem.root();
  CHECK_THROWS_AS(vj_children(instance, {}, {}, root.tree), std::logic_error);
}

TEST_CASE("search matches brute force on small instances", "[stsp]") {
  for (std::uint32_t n = 5; n <= 8; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto instance = generate_stsp(n, 80, mix_key(n, seed));
      auto optimum = brute_force_stsp(instance);
      REQUIRE(optimum.has_value());
      StspProblem problem(instance);
      auto dfs = dfbnb(problem);
      auto bfs = best_first_search(problem);
      CHECK(*dfs.best_cost == static_cast<Cost>(*optimum));
      CHECK(*bfs.best_cost == static_cast<Cost>(*optimum));
      CHECK(dfs.optimal_proven);
      CHECK(bfs.optimal_proven);
    }
  }
}

TEST_CASE("expansion increments never go negative", "[stsp]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto instance = generate_stsp(8, 1000, seed);
    StspProblem problem(instance);
    auto root = problem.root();
    if (problem.is_goal(root)) continue;
    for (const auto& child : problem.expand(root)) CHECK(child.increment >= 0.0);
  }
}

TEST_CASE("fractional bounds round up to the next integer", "[stsp]") {
  CHECK(integer_bound(4.2) == 5.0);
  CHECK(integer_bound(5.0) == 5.0);
  CHECK(integer_bound(5.0 + 1e-9) == 5.0);  // float noise is forgiven
  CHECK(integer_bound(0.0) == 0.0);
}

TEST_CASE("brute force honors required and forbidden edges", "[stsp]") {
  auto instance = unit_square();
  CHECK(*brute_force_stsp(instance) == 4);
  CHECK(*brute_force_stsp(instance, {{0, 1}}) == 4);
  CHECK(*brute_force_stsp(instance, {}, {{0, 1}}) == 4);
  // forcing both diagonals of the square leaves no tour through all four
  CHECK_FALSE(brute_force_stsp(instance, {{0, 1}, {2, 3}}, {{0, 2}, {0, 3}}).has_value());
}

TEST_CASE("instance files round-trip through the triangular format", "[stsp]") {
  auto instance = generate_stsp(6, 500, 77);
  std::ostringstream out;
  write_stsp(out, instance);
  std::istringstream in(out.str());
  auto back = read_stsp(in);
  CHECK(back.n == instance.n);
  CHECK(back.cost == instance.cost);

  std::istringstream truncated("4\n1 2 3\n4");
  CHECK_THROWS_AS(read_stsp(truncated), io_error);
}

TEST_CASE("generator output is symmetric and reproducible", "[stsp]") {
  auto a = generate_stsp(10, 1000, 3);
  auto b = generate_stsp(10, 1000, 3);
  CHECK(a.cost == b.cost);
  for (std::uint32_t i = 0; i < 10; ++i)
    for (std::uint32_t j = 0; j < 10; ++j) {
      CHECK(a.at(i, j) == a.at(j, i));
      if (i != j) CHECK(a.at(i, j) <= 1000);
    }
}

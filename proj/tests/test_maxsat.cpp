#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "anybnb/maxsat.hpp"
#include "anybnb/search.hpp"

using namespace anybnb;

namespace {

// every sign pattern over variables {1,2,3}: each assignment falsifies
// exactly one clause
CnfInstance complete_pattern() {
  CnfInstance cnf;
  cnf.num_vars = 3;
  for (int s = 0; s < 8; ++s) {
    Clause c;
    for (int i = 0; i < 3; ++i) {
      std::int32_t v = i + 1;
      c[i] = (s >> i) & 1 ? -v : v;
    }
    cnf.clauses.push_back(c);
  }
  return cnf;
}

}  // namespace

TEST_CASE("generator is deterministic and yields distinct valid clauses", "[maxsat]") {
  auto a = generate_3sat(10, 40, 7);
  auto b = generate_3sat(10, 40, 7);
  REQUIRE(a.clauses.size() == 40);
  CHECK(a.clauses == b.clauses);
  CHECK_NOTHROW(a.validate());
  auto c = generate_3sat(10, 40, 8);
  CHECK(a.clauses != c.clauses);
}

TEST_CASE("generator realizes every clause when asked for all of them", "[maxsat]") {
  auto cnf = generate_3sat(3, 8, 123);
  REQUIRE(cnf.clauses.size() == 8);
  std::set<Clause> seen(cnf.clauses.begin(), cnf.clauses.end());
  CHECK(seen.size() == 8);
  CHECK(max_distinct_clauses(3) == 8);
  CHECK_THROWS_AS(generate_3sat(3, 9, 123), argument_error);
}

TEST_CASE("instance validation rejects malformed clauses", "[maxsat]") {
  CnfInstance cnf;
  cnf.num_vars = 3;
  cnf.clauses.push_back({1, 2, 2});
  CHECK_THROWS_AS(cnf.validate(), argument_error);
  cnf.clauses = {{1, 2, 4}};
  CHECK_THROWS_AS(cnf.validate(), argument_error);
  cnf.clauses = {{1, 2, 3}, {1, 2, 3}};
  CHECK_THROWS_AS(cnf.validate(), argument_error);
  cnf.clauses = {{1, 0, 3}};
  CHECK_THROWS_AS(cnf.validate(), argument_error);
}

TEST_CASE("dimacs io round-trips and rejects malformed input", "[maxsat]") {
  auto cnf = generate_3sat(8, 25, 5);
  std::ostringstream out;
  write_dimacs(out, cnf);
  std::istringstream in(out.str());
  auto back = read_dimacs(in);
  CHECK(back.num_vars == cnf.num_vars);
  CHECK(back.clauses == cnf.clauses);

  std::istringstream no_header("1 2 3 0\n");
  CHECK_THROWS_AS(read_dimacs(no_header), io_error);
  std::istringstream bad_count("p cnf 3 2\n1 2 3 0\n");
  CHECK_THROWS_AS(read_dimacs(bad_count), io_error);
  std::istringstream four_lits("p cnf 4 1\n1 2 3 4 0\n");
  CHECK_THROWS_AS(read_dimacs(four_lits), io_error);
  std::istringstream comments("c banner\np cnf 3 1\nc mid\n-1 2 -3 0\n");
  auto with_comments = read_dimacs(comments);
  CHECK(with_comments.clauses.size() == 1);
}

TEST_CASE("the complete sign pattern falsifies exactly one clause everywhere", "[maxsat]") {
  auto cnf = complete_pattern();
  CHECK(max_sat_optimum_bruteforce(cnf) == 1);
  CHECK(max_sat_optimum(cnf) == 1);
  SatProblem problem(cnf);
  auto run = dfbnb(problem);
  REQUIRE(run.best_cost.has_value());
  CHECK(*run.best_cost == 1.0);
  CHECK(run.optimal_proven);
}

TEST_CASE("branching orders the cheaper assignment first", "[maxsat]") {
  // with x2..x4 false, both clauses are unit on -x1: setting x1 true
  // falsifies both, false none
  CnfInstance cnf;
  cnf.num_vars = 4;
  cnf.clauses = {{-1, 2, 3}, {-1, 2, 4}};
  SatProblem problem(cnf);
  SatState s;
  s.assignment = {-1, 0, 0, 0};
  s.assigned = 3;
  s.falsified = 0;
  auto children = problem.expand(s);
  REQUIRE(children.size() == 2);
  CHECK(children[0].increment == 2.0);  // true child listed first
  CHECK(children[1].increment == 0.0);
  CHECK(children[0].state.assignment[0] == 1);
  CHECK(children[1].state.assignment[0] == 0);
}

TEST_CASE("satisfied instances expand with zero increments", "[maxsat]") {
  CnfInstance cnf;
  cnf.num_vars = 3;
  cnf.clauses = {{1, 2, 3}};
  SatProblem problem(cnf);
  SatState s;
  s.assignment = {1, -1, -1};
  s.assigned = 1;
  s.falsified = 0;
  auto children = problem.expand(s);
  REQUIRE(children.size() == 2);
  CHECK(children[0].increment == 0.0);
  CHECK(children[1].increment == 0.0);
  // nothing active, so the branch falls back to the lowest unassigned variable
  CHECK(children[0].state.assignment[1] >= 0);
}

TEST_CASE("goals sit at full assignment with recomputed costs", "[maxsat]") {
  auto cnf = generate_3sat(6, 30, 17);
  SatProblem problem(cnf);
  auto stats = enumerate_space(problem);
  CHECK(stats.goal_count == 64);
  REQUIRE(stats.min_goal_g.has_value());
  CHECK(*stats.min_goal_g == static_cast<Cost>(max_sat_optimum_bruteforce(cnf)));
}

TEST_CASE("incremental falsified counts match a full rescan", "[maxsat]") {
  auto cnf = generate_3sat(9, 60, 3);
  SatProblem problem(cnf);
  // walk a few root-to-goal paths, alternating child picks
  for (int path = 0; path < 4; ++path) {
    auto s = problem.root();
    int turn = path;
    while (!problem.is_goal(s)) {
      auto children = problem.expand(s);
      s = children[turn % 2].state;
      turn = turn * 3 + 1;
      CHECK(scan_clauses(cnf, s.assignment).falsified == s.falsified);
    }
  }
}

TEST_CASE("search matches brute force on small instances", "[maxsat]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto cnf = generate_3sat(10, 60, seed);
    auto expected = max_sat_optimum_bruteforce(cnf);
    SatProblem problem(cnf);
    auto dfs = dfbnb(problem);
    auto bfs = best_first_search(problem);
    CHECK(*dfs.best_cost == static_cast<Cost>(expected));
    CHECK(*bfs.best_cost == static_cast<Cost>(expected));
    CHECK(dfs.optimal_proven);
    CHECK(bfs.optimal_proven);
  }
}

TEST_CASE("the exact solver agrees with brute force at ratio 15", "[maxsat]") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto cnf = generate_3sat(12, 180, seed);
    CHECK(max_sat_optimum(cnf) == max_sat_optimum_bruteforce(cnf));
  }
}

TEST_CASE("pure literal absorption keeps the optimum", "[maxsat]") {
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    auto cnf = generate_3sat(10, 30, seed);
    auto expected = max_sat_optimum_bruteforce(cnf);
    SatOptions options;
    options.pure_literal_elimination = true;
    SatProblem absorbing(cnf, options);
    auto run = dfbnb(absorbing);
    CHECK(*run.best_cost == static_cast<Cost>(expected));
    CHECK(run.optimal_proven);
  }
}

TEST_CASE("brute force refuses oversized instances", "[maxsat]") {
  CnfInstance cnf;
  cnf.num_vars = 21;
  cnf.clauses = {{1, 2, 3}};
  CHECK_THROWS_AS(max_sat_optimum_bruteforce(cnf), argument_error);
}

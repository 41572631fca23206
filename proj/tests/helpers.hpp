#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "anybnb/core.hpp"

namespace anybnb::testing {

// Hand-scripted search space for exact traces. States are path-like ids
// ("" is the root); edges carry explicit increments; goals are listed by id.
// Node costs are accumulated from the root at construction.
class ScriptedProblem {
 public:
  using State = std::string;
  using EdgeMap = std::map<std::string, std::vector<std::pair<std::string, Cost>>>;

  ScriptedProblem(EdgeMap edges, std::set<std::string> goals)
      : edges_(std::move(edges)), goals_(std::move(goals)) {
    costs_[""] = 0.0;
    fill_costs("");
  }

  State root() const { return ""; }
  bool is_goal(const State& s) const { return goals_.count(s) > 0; }
  Cost original_cost(const State& s) const { return costs_.at(s); }

  std::vector<Child<State>> expand(const State& s) const {
    std::vector<Child<State>> children;
    if (is_goal(s)) return children;
    auto it = edges_.find(s);
    if (it == edges_.end()) return children;
    for (const auto& [child, increment] : it->second)
      children.push_back(Child<State>{child, increment});
    return children;
  }

 private:
  void fill_costs(const std::string& node) {
    auto it = edges_.find(node);
    if (it == edges_.end()) return;
    for (const auto& [child, increment] : it->second) {
      costs_[child] = costs_.at(node) + increment;
      fill_costs(child);
    }
  }

  EdgeMap edges_;
  std::set<std::string> goals_;
  std::map<std::string, Cost> costs_;
};

// Two-level tree with leaf costs {3, 1, 2, 5}: root -> a (1), b (2);
// a -> leaves {3, 1}; b -> leaves {2, 5}. DFBnB's ascending child order
// reaches the cost-1 leaf first and prunes everything else.
inline ScriptedProblem four_leaf_tree() {
  return ScriptedProblem(
      {
          {"", {{"a", 1.0}, {"b", 2.0}}},
          {"a", {{"a0", 2.0}, {"a1", 0.0}}},
          {"b", {{"b0", 0.0}, {"b1", 3.0}}},
      },
      {"a0", "a1", "b0", "b1"});
}

}  // namespace anybnb::testing

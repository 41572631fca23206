#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace anybnb {

using Cost = double;

inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::infinity();

struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct estimation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct integrity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename S>
struct Child {
  S state;
  Cost increment;  // nonnegative step cost relative to the parent
};

// A search space: root node, expansion into (child, increment) pairs, goal
// test. expand() must be deterministic per state and empty at goals.
// original_cost() reports the problem-space cost used for incumbents and
// anytime records; increments seen by the search may differ under cost
// reductions.
template <typename P>
concept SearchProblem =
    std::copyable<typename P::State> &&
    requires(const P& p, const typename P::State& s) {
      { p.root() } -> std::convertible_to<typename P::State>;
      { p.expand(s) } -> std::convertible_to<std::vector<Child<typename P::State>>>;
      { p.is_goal(s) } -> std::convertible_to<bool>;
      { p.original_cost(s) } -> std::convertible_to<Cost>;
    };

}  // namespace anybnb

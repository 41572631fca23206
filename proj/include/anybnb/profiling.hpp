#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "anybnb/core.hpp"
#include "anybnb/csv.hpp"
#include "anybnb/search.hpp"

namespace anybnb {

struct ProfilePoint {
  std::uint64_t budget = 0;
  double value = 0.0;    // 1 - relative error at this budget
  bool defined = false;  // false before the run's first incumbent
};

struct PerformanceProfile {
  std::vector<ProfilePoint> points;
  Cost optimum = 0.0;
};

// Profile value at budget t: 1 - (best cost by t - optimum) / denominator,
// denominator = max(optimum, floor). The floor guards integer-cost domains
// where the optimum can be zero. Budgets with no incumbent yet are marked
// undefined rather than scored, and excluded from aggregation.
inline PerformanceProfile profile_from_record(const AnytimeRecord& record, Cost optimum,
                                              const std::vector<std::uint64_t>& budgets,
                                              Cost denominator_floor = 1.0) {
  if (budgets.empty()) throw argument_error("profile needs at least one budget");
  for (std::size_t i = 1; i < budgets.size(); ++i)
    if (budgets[i] <= budgets[i - 1])
      throw argument_error("profile budgets must be strictly ascending");
  Cost denominator = std::max(optimum, denominator_floor);
  if (!(denominator > 0.0))
    throw argument_error("profile denominator must be positive");

  const double slack = 1e-9 * std::max(1.0, std::abs(optimum));
  for (const auto& e : record.events)
    if (e.cost < optimum - slack)
      throw integrity_error("anytime record holds a cost below the optimum");

  PerformanceProfile profile;
  profile.optimum = optimum;
  std::size_t next_event = 0;
  bool have_best = false;
  Cost best = 0.0;
  for (std::uint64_t budget : budgets) {
    while (next_event < record.events.size() &&
           record.events[next_event].nodes_generated <= budget) {
      best = record.events[next_event].cost;  // events improve monotonically
      have_best = true;
      ++next_event;
    }
    ProfilePoint point;
    point.budget = budget;
    if (have_best) {
      point.defined = true;
      point.value = 1.0 - (best - optimum) / denominator;
    }
    profile.points.push_back(point);
  }
  return profile;
}

struct AggregatedProfile {
  std::vector<std::uint64_t> budgets;
  std::vector<double> mean_values;          // over runs with a defined value
  std::vector<std::uint64_t> defined_counts;
};

inline AggregatedProfile aggregate_profiles(const std::vector<PerformanceProfile>& profiles) {
  if (profiles.empty()) throw argument_error("no profiles to aggregate");
  const auto& first = profiles.front().points;
  for (const auto& p : profiles) {
    if (p.points.size() != first.size())
      throw argument_error("profiles must share one budget grid");
    for (std::size_t i = 0; i < first.size(); ++i)
      if (p.points[i].budget != first[i].budget)
        throw argument_error("profiles must share one budget grid");
  }
  AggregatedProfile agg;
  for (std::size_t i = 0; i < first.size(); ++i) {
    double sum = 0.0;
    std::uint64_t count = 0;
    for (const auto& p : profiles) {
      if (p.points[i].defined) {
        sum += p.points[i].value;
        ++count;
      }
    }
    agg.budgets.push_back(first[i].budget);
    agg.defined_counts.push_back(count);
    agg.mean_values.push_back(count ? sum / static_cast<double>(count)
                                    : std::numeric_limits<double>::quiet_NaN());
  }
  return agg;
}

inline void write_profile_csv(std::ostream& out, const AggregatedProfile& agg,
                              const std::string& algorithm, const std::string& domain,
                              const std::string& config_hash) {
  out << "budget,mean_profile,n_defined,algorithm,domain,config_hash\n";
  for (std::size_t i = 0; i < agg.budgets.size(); ++i) {
    csv::write_row(out, {std::to_string(agg.budgets[i]),
                         csv::format_number(agg.mean_values[i]),
                         std::to_string(agg.defined_counts[i]), algorithm, domain,
                         config_hash});
  }
}

inline void write_anytime_csv(std::ostream& out, const AnytimeRecord& record) {
  out << "nodes_generated,wall_time_seconds,cost\n";
  for (const auto& e : record.events)
    csv::write_row(out, {std::to_string(e.nodes_generated),
                         csv::format_number(e.wall_time_seconds),
                         csv::format_number(e.cost)});
}

}  // namespace anybnb

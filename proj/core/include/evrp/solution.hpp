#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evrp/types.hpp"

namespace evrp {

struct TruckPlan {
  Engine engine = Engine::conventional;
  std::vector<LocationId> day_route;    // customer visit order, depot endpoints implicit
  std::vector<LocationId> night_route;  // electric trucks only
  Minutes recharge_time = 0;

  bool assigned() const { return !day_route.empty() || !night_route.empty(); }

  friend bool operator==(const TruckPlan&, const TruckPlan&) = default;
};

struct Solution {
  std::vector<TruckPlan> trucks;
  int evse_count = 0;

  int assigned_count(Engine engine) const;

  friend bool operator==(const Solution&, const Solution&) = default;
};

// Constraint families checked by the validator; values match the
// formulation's constraint numbers. Route construction itself (closed,
// depot-rooted loops) holds by representation and has no id here.
enum class ConstraintId : int {
  day_coverage = 4,
  range_conventional = 5,
  capacity_conventional = 7,
  night_requires_day = 8,
  night_only_ohd = 9,
  ohd_coverage = 10,
  day_range_electric = 11,
  night_range_electric = 12,
  capacity_electric = 14,
  recharge_gate = 15,
  evse_budget = 16,
  fleet_bounds = 17,
};

std::string to_string(ConstraintId id);

struct Violation {
  ConstraintId constraint;
  // Truck index for per-truck constraints, location index for coverage
  // constraints, engine code (0 conventional, 1 electric) for fleet_bounds.
  int subject = 0;
  std::int64_t magnitude = 0;  // > 0, size of the breach

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string to_string(const Violation& violation);

}  // namespace evrp

#include "evrp/solution.hpp"

namespace evrp {

int Solution::assigned_count(Engine engine) const {
  int count = 0;
  for (const TruckPlan& truck : trucks) {
    if (truck.engine == engine && truck.assigned()) ++count;
  }
  return count;
}

std::string to_string(ConstraintId id) {
  switch (id) {
    case ConstraintId::day_coverage:
      return "4 (day coverage)";
    case ConstraintId::range_conventional:
      return "5 (conventional day range)";
    case ConstraintId::capacity_conventional:
      return "7 (conventional capacity)";
    case ConstraintId::night_requires_day:
      return "8 (night shift requires day departure)";
    case ConstraintId::night_only_ohd:
      return "9 (night visit at non-OHD location)";
    case ConstraintId::ohd_coverage:
      return "10 (OHD coverage)";
    case ConstraintId::day_range_electric:
      return "11 (electric day range)";
    case ConstraintId::night_range_electric:
      return "12 (electric night range)";
    case ConstraintId::capacity_electric:
      return "14 (electric capacity)";
    case ConstraintId::recharge_gate:
      return "15 (recharge time)";
    case ConstraintId::evse_budget:
      return "16 (EVSE budget)";
    case ConstraintId::fleet_bounds:
      return "17 (fleet bounds)";
  }
  return "unknown";
}

std::string to_string(const Violation& violation) {
  return "constraint " + to_string(violation.constraint) + ", subject " +
         std::to_string(violation.subject) + ", magnitude " +
         std::to_string(violation.magnitude);
}

}  // namespace evrp

#include "evrp/model.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "evrp/errors.hpp"

namespace evrp {

namespace {

void check_route_nodes(const Instance& instance, std::span<const LocationId> route) {
  const auto n = static_cast<LocationId>(instance.location_count());
  for (LocationId id : route) {
    if (id < 0 || id >= n) {
      throw StructuralError("route references unknown location " + std::to_string(id));
    }
    if (id == instance.depot) {
      throw StructuralError("route contains the depot as an interior stop");
    }
  }
}

}  // namespace

Minutes route_travel_time(const Instance& instance, std::span<const LocationId> route,
                          Shift shift) {
  if (route.empty()) return 0;
  check_route_nodes(instance, route);
  const TravelMatrix& matrix =
      shift == Shift::day ? instance.travel_day : instance.travel_night;
  Minutes total = matrix(instance.depot, route.front());
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    total += matrix(route[i], route[i + 1]);
  }
  total += matrix(route.back(), instance.depot);
  return total;
}

std::int64_t route_load(const Instance& instance, std::span<const LocationId> route) {
  check_route_nodes(instance, route);
  std::int64_t load = 0;
  for (LocationId id : route) load += instance.volume[static_cast<std::size_t>(id)];
  return load;
}

Minutes route_service_time(const Instance& instance, std::span<const LocationId> route) {
  check_route_nodes(instance, route);
  Minutes total = 0;
  for (LocationId id : route) total += instance.service_time[static_cast<std::size_t>(id)];
  return total;
}

std::vector<Violation> check_capacity(const Instance& instance, const TruckPlan& truck,
                                      int truck_index) {
  std::vector<Violation> violations;
  const std::int64_t limit = instance.capacity(truck.engine);
  const ConstraintId id = truck.engine == Engine::conventional
                              ? ConstraintId::capacity_conventional
                              : ConstraintId::capacity_electric;
  for (const auto* route : {&truck.day_route, &truck.night_route}) {
    if (route->empty()) continue;
    const std::int64_t load = route_load(instance, *route);
    if (load > limit) {
      violations.push_back({id, truck_index, load - limit});
    }
  }
  return violations;
}

std::vector<Violation> check_range(const Instance& instance, const TruckPlan& truck,
                                   int truck_index, bool include_service_in_range) {
  std::vector<Violation> violations;
  const Minutes limit = instance.range(truck.engine);

  auto shift_time = [&](std::span<const LocationId> route, Shift shift) {
    Minutes t = route_travel_time(instance, route, shift);
    if (include_service_in_range) t += route_service_time(instance, route);
    return t;
  };

  const Minutes day = shift_time(truck.day_route, Shift::day);
  if (day > limit) {
    violations.push_back({truck.engine == Engine::conventional
                              ? ConstraintId::range_conventional
                              : ConstraintId::day_range_electric,
                          truck_index, day - limit});
  }
  if (!truck.night_route.empty() && truck.engine == Engine::electric) {
    const Minutes night = shift_time(truck.night_route, Shift::night);
    if (night > limit) {
      violations.push_back({ConstraintId::night_range_electric, truck_index, night - limit});
    }
  }
  return violations;
}

Minutes required_recharge_time(const Instance& instance, const TruckPlan& truck) {
  if (truck.engine != Engine::electric) {
    throw std::domain_error("recharge time is defined for electric trucks only");
  }
  if (truck.night_route.empty()) return 0;
  const Minutes day = route_travel_time(instance, truck.day_route, Shift::day);
  const double speed = instance.charging.recharge_speed;
  auto required = static_cast<Minutes>(std::ceil(static_cast<double>(day) / speed));
  // Guard against floating-point edges: required is the smallest integer
  // with speed * required >= day.
  while (static_cast<double>(required) * speed < static_cast<double>(day)) ++required;
  while (required > 0 && static_cast<double>(required - 1) * speed >= static_cast<double>(day)) {
    --required;
  }
  return required;
}

int required_evse_count(std::span<const Minutes> recharge_times, Minutes break_window) {
  if (break_window <= 0) throw std::invalid_argument("break_window must be > 0");
  Minutes total = 0;
  for (Minutes r : recharge_times) {
    if (r < 0) throw std::invalid_argument("negative recharge time");
    total += r;
  }
  if (total == 0) return 0;
  return static_cast<int>((total + break_window - 1) / break_window);
}

Cost objective_purchase(const Solution& solution, const CostParams& costs) {
  return costs.tco_conventional * solution.assigned_count(Engine::conventional) +
         costs.tco_electric * solution.assigned_count(Engine::electric) +
         costs.evse_cost * solution.evse_count;
}

Minutes objective_travel(const Instance& instance, const Solution& solution,
                         bool electric_only) {
  Minutes total = 0;
  for (const TruckPlan& truck : solution.trucks) {
    if (electric_only && truck.engine != Engine::electric) continue;
    total += route_travel_time(instance, truck.day_route, Shift::day);
    total += route_travel_time(instance, truck.night_route, Shift::night);
  }
  return total;
}

Score scalar_objective(const Instance& instance, const Solution& solution,
                       const CostParams& costs) {
  return Score{objective_purchase(solution, costs), objective_travel(instance, solution),
               costs.objective_mode};
}

std::vector<Violation> validate(const Instance& instance, const Solution& solution,
                                bool include_service_in_range) {
  std::vector<Violation> violations;

  // Visit counts per location, split by shift.
  std::map<LocationId, std::int64_t> day_visits;
  std::map<LocationId, std::int64_t> night_visits;
  for (const TruckPlan& truck : solution.trucks) {
    check_route_nodes(instance, truck.day_route);
    check_route_nodes(instance, truck.night_route);
    for (LocationId id : truck.day_route) day_visits[id] += 1;
    for (LocationId id : truck.night_route) night_visits[id] += 1;
  }

  for (LocationId c : instance.customers_day_only) {
    const std::int64_t visits = day_visits.count(c) ? day_visits.at(c) : 0;
    if (visits != 1) {
      violations.push_back({ConstraintId::day_coverage, c, std::llabs(visits - 1)});
    }
  }
  for (LocationId c : instance.customers_ohd) {
    const std::int64_t visits = (day_visits.count(c) ? day_visits.at(c) : 0) +
                                (night_visits.count(c) ? night_visits.at(c) : 0);
    if (visits != 1) {
      violations.push_back({ConstraintId::ohd_coverage, c, std::llabs(visits - 1)});
    }
  }

  std::vector<Minutes> recharge_times;
  for (std::size_t k = 0; k < solution.trucks.size(); ++k) {
    const TruckPlan& truck = solution.trucks[k];
    const int index = static_cast<int>(k);

    if (!truck.night_route.empty()) {
      if (truck.engine == Engine::conventional || truck.day_route.empty()) {
        violations.push_back({ConstraintId::night_requires_day, index,
                              static_cast<std::int64_t>(truck.night_route.size())});
      }
      for (LocationId id : truck.night_route) {
        if (!instance.is_ohd(id)) {
          violations.push_back({ConstraintId::night_only_ohd, id, 1});
        }
      }
    }

    auto capacity = check_capacity(instance, truck, index);
    violations.insert(violations.end(), capacity.begin(), capacity.end());
    auto range = check_range(instance, truck, index, include_service_in_range);
    violations.insert(violations.end(), range.begin(), range.end());

    if (truck.engine == Engine::electric) {
      const Minutes required = required_recharge_time(instance, truck);
      if (truck.recharge_time < required) {
        violations.push_back(
            {ConstraintId::recharge_gate, index, required - truck.recharge_time});
      }
      // The gate works both ways: recharging without night operations breaks
      // the recharge_time = 0 <=> empty night route invariant.
      if (truck.night_route.empty() && truck.recharge_time != 0) {
        violations.push_back(
            {ConstraintId::recharge_gate, index, std::llabs(truck.recharge_time)});
      }
      recharge_times.push_back(std::max<Minutes>(truck.recharge_time, 0));
    } else if (truck.recharge_time != 0) {
      violations.push_back(
          {ConstraintId::recharge_gate, index, std::llabs(truck.recharge_time)});
    }
  }

  const int evse_needed = required_evse_count(recharge_times, instance.charging.break_window);
  if (solution.evse_count < evse_needed) {
    Minutes total = 0;
    for (Minutes r : recharge_times) total += r;
    violations.push_back({ConstraintId::evse_budget, 0,
                          total - instance.charging.break_window * solution.evse_count});
  }

  const int conventional = solution.assigned_count(Engine::conventional);
  const int electric = solution.assigned_count(Engine::electric);
  if (conventional > instance.trucks.max_conventional) {
    violations.push_back({ConstraintId::fleet_bounds, 0,
                          conventional - instance.trucks.max_conventional});
  }
  if (electric > instance.trucks.max_electric) {
    violations.push_back(
        {ConstraintId::fleet_bounds, 1, electric - instance.trucks.max_electric});
  }

  return violations;
}

}  // namespace evrp

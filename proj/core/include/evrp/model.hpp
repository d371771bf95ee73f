#pragma once

#include <span>
#include <vector>

#include "evrp/instance.hpp"
#include "evrp/solution.hpp"
#include "evrp/types.hpp"

namespace evrp {

// Travel time of the closed loop depot -> route... -> depot under the given
// shift's matrix; 0 for an empty route. Throws StructuralError on unknown
// location indices or a depot appearing inside the route.
Minutes route_travel_time(const Instance& instance, std::span<const LocationId> route,
                          Shift shift);

std::int64_t route_load(const Instance& instance, std::span<const LocationId> route);

Minutes route_service_time(const Instance& instance, std::span<const LocationId> route);

// Per-shift load checks. Each shift is one depot-rooted loop with a full
// reload at the depot in between, so the cumulative-load formulation reduces
// to independent per-shift sums.
std::vector<Violation> check_capacity(const Instance& instance, const TruckPlan& truck,
                                      int truck_index = 0);

// Per-shift travel-time limits. Only travel counts by default; service time
// can be added with include_service_in_range.
std::vector<Violation> check_range(const Instance& instance, const TruckPlan& truck,
                                   int truck_index = 0,
                                   bool include_service_in_range = false);

// Minimum recharge minutes for an electric truck: 0 with no night route,
// otherwise the smallest integer r with recharge_speed * r >= day travel.
// Throws std::domain_error for conventional trucks.
Minutes required_recharge_time(const Instance& instance, const TruckPlan& truck);

// ceil(sum of recharge times / break_window); 0 when the sum is 0.
int required_evse_count(std::span<const Minutes> recharge_times, Minutes break_window);

Cost objective_purchase(const Solution& solution, const CostParams& costs);

// Total travel time over day and night routes. electric_only restricts the
// sum to electric trucks, mirroring the narrower objective variant.
Minutes objective_travel(const Instance& instance, const Solution& solution,
                         bool electric_only = false);

Score scalar_objective(const Instance& instance, const Solution& solution,
                       const CostParams& costs);

// Checks every constraint family directly on the candidate: coverage of the
// day-only and OHD customer sets, night-shift domain rules, capacity, range,
// recharge gating, EVSE budget, and fleet bounds. Returns all violations.
std::vector<Violation> validate(const Instance& instance, const Solution& solution,
                                bool include_service_in_range = false);

}  // namespace evrp

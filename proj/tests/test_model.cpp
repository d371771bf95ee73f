#include "doctest.h"

#include <numeric>

#include "evrp/errors.hpp"
#include "evrp/exact.hpp"
#include "evrp/generate.hpp"
#include "evrp/model.hpp"
#include "support/builders.hpp"

using namespace evrp;
using test_support::make_instance;
using test_support::symmetric_matrix;

namespace {

// depot 0, customers 1 and 2, arcs 0-1: 10, 1-2: 5, 0-2: 12.
Instance three_node() {
  return make_instance(3, symmetric_matrix(3, {{0, 1, 10}, {1, 2, 5}, {0, 2, 12}}));
}

}  // namespace

TEST_CASE("route_travel_time sums the closed loop") {
  const Instance instance = three_node();
  CHECK(route_travel_time(instance, std::vector<LocationId>{}, Shift::day) == 0);
  CHECK(route_travel_time(instance, std::vector<LocationId>{1, 2}, Shift::day) == 27);
  CHECK(route_travel_time(instance, std::vector<LocationId>{2, 1}, Shift::day) == 27);
}

TEST_CASE("route_travel_time rejects malformed routes") {
  const Instance instance = three_node();
  CHECK_THROWS_AS(route_travel_time(instance, std::vector<LocationId>{9}, Shift::day),
                  StructuralError);
  CHECK_THROWS_AS(route_travel_time(instance, std::vector<LocationId>{1, 0, 2}, Shift::day),
                  StructuralError);
}

TEST_CASE("night matrix at day/1.3 scales route time by 1/1.3") {
  // Day arcs divisible so that night = day / 1.3 stays integral.
  const auto day = symmetric_matrix(3, {{0, 1, 13}, {1, 2, 26}, {0, 2, 39}});
  auto night = day;
  for (Minutes& t : night) t = t * 10 / 13;
  const Instance instance = make_instance(3, day, night, {1, 2});
  const std::vector<LocationId> route{1, 2};
  CHECK(route_travel_time(instance, route, Shift::day) == 78);
  CHECK(route_travel_time(instance, route, Shift::night) == 60);  // 78 / 1.3
}

TEST_CASE("check_capacity flags per-shift overloads") {
  Instance instance = three_node();
  instance.volume = {0, 100, 50};
  instance.service_time = {0, 200, 100};

  TruckPlan truck;
  truck.day_route = {1, 2};

  SUBCASE("overload magnitude is the excess") {
    instance.trucks.capacity_conventional = 140;
    const auto violations = check_capacity(instance, truck, 3);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintId::capacity_conventional);
    CHECK(violations[0].subject == 3);
    CHECK(violations[0].magnitude == 10);
  }

  SUBCASE("boundary equality is feasible") {
    instance.trucks.capacity_conventional = 150;
    CHECK(check_capacity(instance, truck).empty());
  }
}

TEST_CASE("a full truck of unit orders fits exactly") {
  // 140 customers, one order each, capacity 140.
  const std::size_t locations = 141;
  const Instance instance =
      make_instance(locations, std::vector<Minutes>(locations * locations, 0));
  TruckPlan truck;
  truck.day_route.resize(140);
  std::iota(truck.day_route.begin(), truck.day_route.end(), 1);
  CHECK(check_capacity(instance, truck).empty());
}

TEST_CASE("check_range checks each shift separately") {
  // Single far customer: round trip 421 by day.
  Instance instance = make_instance(
      3, symmetric_matrix(3, {{0, 1, 210}, {1, 2, 1}, {0, 2, 208}}),
      symmetric_matrix(3, {{0, 1, 207}, {1, 2, 1}, {0, 2, 207}}), {1, 2});

  SUBCASE("one minute over the electric range") {
    TruckPlan truck{Engine::electric, {1, 2}, {}, 0};
    // 210 + 1 + 208 = 419 <= 420 is fine; shrink the range to force a breach.
    instance.trucks.range_electric = 418;
    const auto violations = check_range(instance, truck);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintId::day_range_electric);
    CHECK(violations[0].magnitude == 1);
  }

  SUBCASE("empty conventional route has no violation") {
    const TruckPlan truck;
    CHECK(check_range(instance, truck).empty());
  }

  SUBCASE("both shifts just under the limit are feasible") {
    // 414 day travel and 414 night travel against a 420-minute range.
    Instance wide = make_instance(3, symmetric_matrix(3, {{0, 1, 207}, {0, 2, 207}}),
                                  symmetric_matrix(3, {{0, 1, 207}, {0, 2, 207}}), {2});
    TruckPlan truck{Engine::electric, {1}, {2}, 60};
    CHECK(check_range(wide, truck).empty());
  }

  SUBCASE("service time counts only when asked") {
    TruckPlan truck{Engine::electric, {1, 2}, {}, 0};
    instance.trucks.range_electric = 420;
    instance.service_time = {0, 10, 10};
    CHECK(check_range(instance, truck).empty());
    const auto violations = check_range(instance, truck, 0, true);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].magnitude == 419 + 20 - 420);
  }
}

TEST_CASE("required_recharge_time follows the recharge-speed ratio") {
  Instance instance = make_instance(
      2, symmetric_matrix(2, {{0, 1, 210}}), {}, {1});
  TruckPlan truck{Engine::electric, {1}, {1}, 0};

  SUBCASE("seven hours of driving need one hour of recharging") {
    instance.travel_day(0, 1) = 210;
    instance.travel_day(1, 0) = 210;
    CHECK(required_recharge_time(instance, truck) == 60);  // 420 / 7
  }

  SUBCASE("half the driving needs half the recharging") {
    instance.travel_day(0, 1) = 105;
    instance.travel_day(1, 0) = 105;
    CHECK(required_recharge_time(instance, truck) == 30);  // 210 / 7
  }

  SUBCASE("no night route needs no recharging") {
    truck.night_route.clear();
    CHECK(required_recharge_time(instance, truck) == 0);
  }

  SUBCASE("conventional trucks have no recharge time") {
    truck.engine = Engine::conventional;
    CHECK_THROWS_AS(required_recharge_time(instance, truck), std::domain_error);
  }

  SUBCASE("fractional quotients round up to the next minute") {
    instance.travel_day(0, 1) = 211;
    instance.travel_day(1, 0) = 210;
    CHECK(required_recharge_time(instance, truck) == 61);  // ceil(421 / 7)
  }
}

TEST_CASE("required_evse_count is the ceiling of the recharge sum") {
  CHECK(required_evse_count(std::vector<Minutes>{}, 240) == 0);
  CHECK(required_evse_count(std::vector<Minutes>{60, 60, 60, 60, 60}, 240) == 2);
  CHECK(required_evse_count(std::vector<Minutes>{240}, 240) == 1);
  CHECK(required_evse_count(std::vector<Minutes>{0, 0}, 240) == 0);
}

TEST_CASE("objective_purchase prices assigned trucks and plugs") {
  const CostParams flat_costs{1000, 1000, 0, ObjectiveMode::weighted_sum};
  CHECK(objective_purchase(Solution{}, flat_costs) == 0);

  Solution four;
  for (int i = 0; i < 4; ++i) four.trucks.push_back({Engine::conventional, {1}, {}, 0});
  CHECK(objective_purchase(four, flat_costs) == 4000);

  // 95% electric TCO and 20% EVSE cost relative to a 100-unit diesel truck.
  const CostParams scaled{100, 95, 20, ObjectiveMode::weighted_sum};
  Solution mixed;
  mixed.trucks.push_back({Engine::conventional, {1}, {}, 0});
  mixed.trucks.push_back({Engine::conventional, {2}, {}, 0});
  mixed.trucks.push_back({Engine::electric, {3}, {}, 0});
  mixed.evse_count = 1;
  CHECK(objective_purchase(mixed, scaled) == 315);

  // Unassigned trucks cost nothing.
  mixed.trucks.push_back({Engine::electric, {}, {}, 0});
  CHECK(objective_purchase(mixed, scaled) == 315);
}

TEST_CASE("objective_travel sums both shifts over the fleet") {
  const auto day = symmetric_matrix(3, {{0, 1, 10}, {1, 2, 5}, {0, 2, 12}});
  const auto night = symmetric_matrix(3, {{0, 1, 4}, {1, 2, 2}, {0, 2, 7}});
  const Instance instance = make_instance(3, day, night, {2});

  CHECK(objective_travel(instance, Solution{}) == 0);

  Solution solution;
  solution.trucks.push_back({Engine::electric, {1}, {2}, 10});
  // day loop 20, night loop 14 -> hand sum 34.
  CHECK(objective_travel(instance, solution) == 34);

  solution.trucks.push_back({Engine::conventional, {2}, {}, 0});
  CHECK(objective_travel(instance, solution) == 34 + 24);
  CHECK(objective_travel(instance, solution, true) == 34);
}

TEST_CASE("moving customers to faster night arcs lowers travel") {
  GenParams params;
  params.customer_count = 6;
  params.ohd_ratio = 1.0;
  params.seed = 11;
  const Instance instance = generate(params);

  const auto customers = instance.all_customers();
  const auto [day_route, day_time] = optimal_route(instance, customers, Shift::day);
  const auto [night_route, night_time] = optimal_route(instance, customers, Shift::night);
  CHECK(night_time < day_time);
}

TEST_CASE("scalar_objective honours the objective mode") {
  const Instance instance = three_node();

  SUBCASE("weighted sum adds both terms") {
    const Score score{4000, 16812, ObjectiveMode::weighted_sum};
    CHECK(score.scalar() == 20812);
  }

  SUBCASE("lexicographic order compares purchase first") {
    const Score a{3000, 500, ObjectiveMode::lexicographic};
    const Score b{3100, 10, ObjectiveMode::lexicographic};
    const Score c{3000, 400, ObjectiveMode::lexicographic};
    CHECK(a < b);
    CHECK(a > c);
  }

  SUBCASE("modes never compare against each other") {
    const Score a{1, 1, ObjectiveMode::weighted_sum};
    const Score b{1, 1, ObjectiveMode::lexicographic};
    CHECK_THROWS_AS((void)(a < b), std::logic_error);
  }

  SUBCASE("computed from a solution") {
    Solution solution;
    solution.trucks.push_back({Engine::conventional, {1, 2}, {}, 0});
    const Score score = scalar_objective(instance, solution, instance.costs);
    CHECK(score.purchase == 1000);
    CHECK(score.travel == 27);
    CHECK(score.scalar() == 1027);
  }
}

namespace {

Instance validation_instance() {
  // depot 0; day-only customers 1, 2; OHD customers 3, 4.
  const auto day = symmetric_matrix(5, {{0, 1, 10},
                                        {0, 2, 12},
                                        {0, 3, 8},
                                        {0, 4, 9},
                                        {1, 2, 5},
                                        {1, 3, 7},
                                        {1, 4, 11},
                                        {2, 3, 6},
                                        {2, 4, 4},
                                        {3, 4, 3}});
  auto night = day;
  for (Minutes& t : night) t = (t * 10 + 6) / 13;
  return make_instance(5, day, night, {3, 4});
}

Solution feasible_solution() {
  Solution solution;
  solution.trucks.push_back({Engine::electric, {1, 2}, {4, 3}, 10});
  solution.evse_count = 1;
  return solution;
}

}  // namespace

TEST_CASE("validate accepts a feasible hand-built solution") {
  const Instance instance = validation_instance();
  Solution solution = feasible_solution();
  solution.trucks[0].recharge_time =
      required_recharge_time(instance, solution.trucks[0]);
  CHECK(validate(instance, solution).empty());
}

TEST_CASE("validate reports every constraint family") {
  const Instance instance = validation_instance();

  SUBCASE("night route on a conventional truck") {
    Solution solution;
    solution.trucks.push_back({Engine::conventional, {1, 2}, {3, 4}, 0});
    const auto violations = validate(instance, solution);
    bool found = false;
    for (const Violation& v : violations) {
      if (v.constraint == ConstraintId::night_requires_day) found = true;
    }
    CHECK(found);
  }

  SUBCASE("double coverage across shifts") {
    Solution solution = feasible_solution();
    solution.trucks[0].recharge_time =
        required_recharge_time(instance, solution.trucks[0]);
    solution.trucks[0].day_route.push_back(3);  // 3 already served at night
    auto recomputed = solution;
    recomputed.trucks[0].recharge_time =
        required_recharge_time(instance, recomputed.trucks[0]);
    const auto violations = validate(instance, recomputed);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintId::ohd_coverage);
    CHECK(violations[0].subject == 3);
    CHECK(violations[0].magnitude == 1);
  }

  SUBCASE("missing customer") {
    Solution solution = feasible_solution();
    solution.trucks[0].day_route = {1};  // customer 2 dropped
    solution.trucks[0].recharge_time =
        required_recharge_time(instance, solution.trucks[0]);
    const auto violations = validate(instance, solution);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintId::day_coverage);
    CHECK(violations[0].subject == 2);
  }

  SUBCASE("day-only customer served at night") {
    Solution solution;
    solution.trucks.push_back({Engine::electric, {2, 3, 4}, {1}, 60});
    const auto violations = validate(instance, solution);
    bool night_domain = false;
    bool day_coverage = false;
    for (const Violation& v : violations) {
      if (v.constraint == ConstraintId::night_only_ohd && v.subject == 1) night_domain = true;
      if (v.constraint == ConstraintId::day_coverage && v.subject == 1) day_coverage = true;
    }
    CHECK(night_domain);
    CHECK(day_coverage);
  }

  SUBCASE("recharge gate works in both directions") {
    Solution solution = feasible_solution();
    solution.trucks[0].recharge_time = 0;  // night route present, no recharge
    auto violations = validate(instance, solution);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintId::recharge_gate);

    Solution idle;
    idle.trucks.push_back({Engine::electric, {1, 2, 3, 4}, {}, 30});
    idle.evse_count = 1;  // keep the EVSE budget satisfied
    violations = validate(instance, idle);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintId::recharge_gate);
    CHECK(violations[0].magnitude == 30);
  }

  SUBCASE("EVSE budget lower bound is tight") {
    Solution solution = feasible_solution();
    solution.trucks[0].recharge_time =
        required_recharge_time(instance, solution.trucks[0]);
    solution.evse_count =
        required_evse_count(std::vector<Minutes>{solution.trucks[0].recharge_time},
                            instance.charging.break_window);
    CHECK(validate(instance, solution).empty());
    solution.evse_count -= 1;
    const auto violations = validate(instance, solution);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintId::evse_budget);
  }

  SUBCASE("fleet bounds") {
    Instance bounded = instance;
    bounded.trucks.max_conventional = 1;
    Solution solution;
    solution.trucks.push_back({Engine::conventional, {1}, {}, 0});
    solution.trucks.push_back({Engine::conventional, {2}, {}, 0});
    solution.trucks.push_back({Engine::electric, {3, 4}, {}, 0});
    const auto violations = validate(bounded, solution);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].constraint == ConstraintId::fleet_bounds);
    CHECK(violations[0].magnitude == 1);
  }

  SUBCASE("unknown location index is structural, not a violation") {
    Solution solution = feasible_solution();
    solution.trucks[0].day_route.push_back(17);
    CHECK_THROWS_AS(validate(instance, solution), StructuralError);
  }

  SUBCASE("negative recharge time is reported, never thrown") {
    Solution solution = feasible_solution();
    solution.trucks[0].recharge_time = -5;
    const auto violations = validate(instance, solution);
    bool gate = false;
    for (const Violation& v : violations) {
      if (v.constraint == ConstraintId::recharge_gate) gate = true;
      CHECK(v.magnitude > 0);
    }
    CHECK(gate);
  }
}

TEST_CASE("validator-clean solutions cover each customer exactly once") {
  GenParams params;
  params.customer_count = 12;
  params.ohd_ratio = 0.5;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    params.seed = seed;
    const Instance instance = generate(params);
    Solution solution;
    // One truck per customer: trivially feasible.
    for (LocationId c : instance.all_customers()) {
      solution.trucks.push_back({Engine::conventional, {c}, {}, 0});
    }
    REQUIRE(validate(instance, solution).empty());
    std::vector<int> seen(instance.location_count(), 0);
    for (const TruckPlan& truck : solution.trucks) {
      for (LocationId c : truck.day_route) seen[static_cast<std::size_t>(c)] += 1;
      for (LocationId c : truck.night_route) seen[static_cast<std::size_t>(c)] += 1;
    }
    for (LocationId c : instance.all_customers()) {
      CHECK(seen[static_cast<std::size_t>(c)] == 1);
    }
  }
}

TEST_CASE("objective_travel matches an independent arc accumulation") {
  GenParams params;
  params.customer_count = 9;
  params.ohd_ratio = 0.4;
  params.seed = 17;
  const Instance instance = generate(params);
  Solution solution;
  solution.trucks.push_back({Engine::electric, {1, 4, 7}, {}, 0});
  solution.trucks.push_back({Engine::conventional, {2, 3, 5, 6, 8, 9}, {}, 0});

  // Recompute from raw matrix entries, arc by arc, in reverse order.
  Minutes expected = 0;
  for (const TruckPlan& truck : solution.trucks) {
    for (const auto* route : {&truck.night_route, &truck.day_route}) {
      if (route->empty()) continue;
      const TravelMatrix& matrix =
          route == &truck.day_route ? instance.travel_day : instance.travel_night;
      std::vector<LocationId> closed;
      closed.push_back(instance.depot);
      closed.insert(closed.end(), route->begin(), route->end());
      closed.push_back(instance.depot);
      for (std::size_t i = closed.size(); i-- > 1;) {
        expected += matrix(closed[i - 1], closed[i]);
      }
    }
  }
  CHECK(objective_travel(instance, solution) == expected);
}

TEST_CASE("scaling all costs scales purchase and leaves validation unchanged") {
  const Instance instance = validation_instance();
  Solution solution = feasible_solution();
  solution.trucks[0].recharge_time = required_recharge_time(instance, solution.trucks[0]);

  const Cost base = objective_purchase(solution, instance.costs);
  for (Cost lambda : {2, 5, 13}) {
    Instance scaled = instance;
    scaled.costs.tco_conventional *= lambda;
    scaled.costs.tco_electric *= lambda;
    scaled.costs.evse_cost *= lambda;
    CHECK(objective_purchase(solution, scaled.costs) == lambda * base);
    CHECK(validate(scaled, solution).empty());
  }
}

TEST_CASE("optional night service never increases optimal travel") {
  GenParams params;
  params.customer_count = 6;
  params.ohd_ratio = 1.0;
  params.seed = 23;
  const Instance instance = generate(params);
  const auto customers = instance.all_customers();

  const auto [unused_route, all_day] = optimal_route(instance, customers, Shift::day);

  Minutes best_split = all_day;
  const std::size_t subsets = std::size_t{1} << customers.size();
  for (std::size_t mask = 1; mask + 1 < subsets; ++mask) {
    std::vector<LocationId> day;
    std::vector<LocationId> night;
    for (std::size_t i = 0; i < customers.size(); ++i) {
      if (mask & (std::size_t{1} << i)) {
        night.push_back(customers[i]);
      } else {
        day.push_back(customers[i]);
      }
    }
    const auto [r1, day_time] = optimal_route(instance, day, Shift::day);
    const auto [r2, night_time] = optimal_route(instance, night, Shift::night);
    best_split = std::min(best_split, day_time + night_time);
  }
  CHECK(best_split <= all_day);
}

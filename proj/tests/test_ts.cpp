#include "doctest.h"

#include <set>

#include "evrp/exact.hpp"
#include "evrp/generate.hpp"
#include "evrp/model.hpp"
#include "evrp/ts.hpp"
#include "support/builders.hpp"

using namespace evrp;
using test_support::make_instance;
using test_support::symmetric_matrix;

TEST_CASE("tabu tenure and iteration cap follow the square-root rules") {
  struct Expected {
    int length;
    int tenure;
    int cap;
  };
  // round(sqrt(L)) and ceil(sqrt(2 L)).
  for (const Expected e : {Expected{4, 2, 3}, Expected{9, 3, 5}, Expected{16, 4, 6},
                           Expected{25, 5, 8}, Expected{12, 3, 5}, Expected{13, 4, 6}}) {
    CHECK(tabu_tenure(e.length) == e.tenure);
    CHECK(tabu_iteration_cap(e.length) == e.cap);
  }
}

TEST_CASE("tabu list holds at most tenure entries and expires in order") {
  TabuState tabu(2);
  tabu.record(std::vector<LocationId>{1, 2});
  tabu.record(std::vector<LocationId>{3});
  CHECK(tabu.is_tabu(1));
  CHECK(tabu.is_tabu(2));
  CHECK(tabu.is_tabu(3));
  tabu.record(std::vector<LocationId>{4});  // evicts {1, 2}
  CHECK_FALSE(tabu.is_tabu(1));
  CHECK_FALSE(tabu.is_tabu(2));
  CHECK(tabu.is_tabu(3));
  CHECK(tabu.is_tabu(4));
  CHECK(tabu.entries().size() == 2);
}

namespace {

Instance ts_instance() {
  // depot 0, customers 1..4; OHD at 3 and 4; night arcs faster.
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
  for (Minutes& t : night) t = (t * 10) / 13;
  return make_instance(5, day, night, {3, 4});
}

}  // namespace

TEST_CASE("initial_route construction") {
  const Instance instance = ts_instance();

  SUBCASE("single conventional customer") {
    const RouteString route =
        initial_route(instance, Engine::conventional, std::vector<LocationId>{2}, {});
    CHECK(route.day == std::vector<LocationId>{2});
    CHECK(route.night.empty());
    CHECK(route.length() == 3);
  }

  SUBCASE("conventional trucks ignore eligibility") {
    const RouteString route = initial_route(
        instance, Engine::conventional, std::vector<LocationId>{1, 3, 4},
        std::vector<LocationId>{3, 4});
    CHECK(route.night.empty());
    CHECK(route.day.size() == 3);
  }

  SUBCASE("a lone eligible customer on faster night arcs lands in the night") {
    // Per-arc comparison: the round trip at night is day / 1.3.
    const RouteString route = initial_route(instance, Engine::electric,
                                            std::vector<LocationId>{4},
                                            std::vector<LocationId>{4});
    CHECK(route.day.empty());
    CHECK(route.night == std::vector<LocationId>{4});
    CHECK(route.has_separator());
    CHECK(route.length() == 4);
  }

  SUBCASE("an eligible customer joins the day tour when insertion there is cheaper") {
    const RouteString route =
        initial_route(instance, Engine::electric, std::vector<LocationId>{1, 4},
                      std::vector<LocationId>{4});
    // Day insertion next to customer 1 costs 10; a separate night loop 12.
    CHECK(route.day == std::vector<LocationId>{4, 1});
    CHECK(route.night.empty());
  }

  SUBCASE("the search never returns a night shift without a day departure") {
    const TsResult result =
        tabu_search_route(instance, Engine::electric, std::vector<LocationId>{3, 4},
                          std::vector<LocationId>{3, 4}, 1);
    if (!result.route.night.empty()) CHECK(!result.route.day.empty());
  }
}

TEST_CASE("move enumeration respects the string rules") {
  const Instance instance = ts_instance();

  SUBCASE("two-customer day segment has exactly one swap") {
    RouteString route{Engine::conventional, {1, 2}, {}};
    int swaps = 0;
    for (const TsMove& move : enumerate_moves(route, {})) {
      if (move.kind == TsMoveKind::node_swap) ++swaps;
    }
    CHECK(swaps == 1);
  }

  SUBCASE("inserts across the separator exist only for eligible customers") {
    RouteString route{Engine::electric, {1, 3}, {4}};
    const std::vector<LocationId> eligible{3, 4};
    bool eligible_crossing = false;
    bool ineligible_crossing = false;
    for (const TsMove& move : enumerate_moves(route, eligible)) {
      if (move.kind != TsMoveKind::insert) continue;
      if (move.seg_a == 0 && move.seg_b == 1) {
        const RouteString after = apply_move(route, move);
        for (LocationId id : after.night) {
          if (id == 3) eligible_crossing = true;
          if (id == 1) ineligible_crossing = true;
        }
      }
    }
    CHECK(eligible_crossing);
    CHECK_FALSE(ineligible_crossing);
  }

  SUBCASE("moves never strand a night shift without a day departure") {
    RouteString route{Engine::electric, {3}, {4}};
    for (const TsMove& move : enumerate_moves(route, std::vector<LocationId>{3, 4})) {
      const RouteString after = apply_move(route, move);
      CHECK((!after.day.empty() || after.night.empty()));
    }
  }

  SUBCASE("2-opt reverses within one segment") {
    RouteString route{Engine::conventional, {1, 2, 3}, {}};
    std::set<std::vector<LocationId>> results;
    for (const TsMove& move : enumerate_moves(route, {})) {
      if (move.kind != TsMoveKind::two_opt) continue;
      results.insert(apply_move(route, move).day);
    }
    const std::set<std::vector<LocationId>> expected{
        {2, 1, 3}, {1, 3, 2}, {3, 2, 1}};
    CHECK(results == expected);
  }
}

TEST_CASE("neighbors filter tabu moves unless they aspire") {
  const Instance instance = ts_instance();
  RouteString route{Engine::conventional, {1, 2}, {}};

  TabuState fresh(3);
  const auto open = neighbors(instance, route, {}, fresh, 0);
  CHECK(!open.empty());

  TabuState blocked(3);
  blocked.record(std::vector<LocationId>{1});
  blocked.record(std::vector<LocationId>{2});
  // Every move touches customer 1 or 2; with an unbeatable best-known all
  // are tabu.
  CHECK(neighbors(instance, route, {}, blocked, 0).empty());
  // A generous best-known lets aspiring moves through.
  CHECK(!neighbors(instance, route, {}, blocked, 10'000).empty());
}

TEST_CASE("tabu_search_route basics") {
  const Instance instance = ts_instance();

  SUBCASE("empty customer set") {
    const TsResult result =
        tabu_search_route(instance, Engine::electric, {}, {}, 1);
    CHECK(result.route.day.empty());
    CHECK(result.route.night.empty());
    CHECK(result.day_time == 0);
    CHECK(result.night_time == 0);
    CHECK(result.feasible);
  }

  SUBCASE("trace reports the square-root parameters for |L| = 9") {
    // 7 customers, no eligibility: string length 2 + 7 = 9.
    GenParams params;
    params.customer_count = 7;
    params.seed = 41;
    const Instance seven = generate(params);
    TsTrace trace;
    tabu_search_route(seven, Engine::conventional, seven.all_customers(), {}, 1, &trace);
    CHECK(trace.string_length == 9);
    CHECK(trace.tenure == 3);
    CHECK(trace.iteration_cap == 5);
    CHECK(static_cast<int>(trace.steps.size()) <= 5);
  }

  SUBCASE("single-shift four-customer tasks reach the exact optimum") {
    GenParams params;
    params.customer_count = 4;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      params.seed = seed;
      const Instance inst = generate(params);
      const TsResult result =
          tabu_search_route(inst, Engine::conventional, inst.all_customers(), {}, seed);
      const auto [route, best] = optimal_route(inst, inst.all_customers(), Shift::day);
      CHECK(result.day_time == best);
    }
  }
}

TEST_CASE("tabu search result invariants") {
  GenParams params;
  params.customer_count = 8;
  params.ohd_ratio = 0.5;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    params.seed = seed;
    const Instance instance = generate(params);
    std::vector<LocationId> eligible = instance.customers_ohd;
    const TsResult result = tabu_search_route(instance, Engine::electric,
                                              instance.all_customers(), eligible, seed);
    // Separator exactly when the night segment is nonempty; night customers
    // all eligible.
    CHECK(result.route.has_separator() == !result.route.night.empty());
    for (LocationId id : result.route.night) {
      CHECK(instance.is_ohd(id));
    }
    if (!result.route.night.empty()) CHECK(!result.route.day.empty());
    CHECK(result.day_time == route_travel_time(instance, result.route.day, Shift::day));
    CHECK(result.night_time ==
          route_travel_time(instance, result.route.night, Shift::night));
  }
}

TEST_CASE("best-so-far travel is non-increasing along the trace") {
  GenParams params;
  params.customer_count = 10;
  params.ohd_ratio = 0.3;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    params.seed = seed;
    const Instance instance = generate(params);
    TsTrace trace;
    tabu_search_route(instance, Engine::electric, instance.all_customers(),
                      instance.customers_ohd, seed, &trace);
    Minutes best = trace.initial_time;
    for (const TsTraceStep& step : trace.steps) {
      CHECK(step.best_time <= best);
      best = step.best_time;
    }
  }
}

TEST_CASE("tabu discipline holds along the trace") {
  GenParams params;
  params.customer_count = 12;
  params.ohd_ratio = 0.4;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    params.seed = seed;
    const Instance instance = generate(params);
    TsTrace trace;
    tabu_search_route(instance, Engine::electric, instance.all_customers(),
                      instance.customers_ohd, seed, &trace);
    for (const TsTraceStep& step : trace.steps) {
      bool touches_tabu = false;
      for (const auto& entry : step.tabu_before) {
        for (LocationId id : entry) {
          for (LocationId moved : step.moved) {
            if (moved == id) touches_tabu = true;
          }
        }
      }
      if (touches_tabu) CHECK(step.aspiration);
    }
  }
}

TEST_CASE("five-customer single-shift tasks match the oracle on at least 95 percent") {
  GenParams params;
  params.customer_count = 5;
  int matches = 0;
  const int tasks = 200;
  for (int i = 0; i < tasks; ++i) {
    params.seed = 1000 + static_cast<std::uint64_t>(i);
    const Instance instance = generate(params);
    const TsResult result = tabu_search_route(instance, Engine::conventional,
                                              instance.all_customers(), {}, params.seed);
    const auto [route, best] = optimal_route(instance, instance.all_customers(), Shift::day);
    REQUIRE(result.day_time >= best);  // never below the optimum
    if (result.day_time == best) ++matches;
  }
  CHECK(matches >= 190);
}

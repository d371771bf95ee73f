#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "evrp/instance.hpp"
#include "evrp/solution.hpp"
#include "evrp/types.hpp"

namespace evrp {

// Single-truck string solution: depot, day-shift customers, recharge
// separator, night-shift customers, depot. The separator exists exactly when
// the truck is electric and the night segment is nonempty; every node behind
// it must allow off-hour delivery.
struct RouteString {
  Engine engine = Engine::conventional;
  std::vector<LocationId> day;
  std::vector<LocationId> night;

  bool has_separator() const { return engine == Engine::electric && !night.empty(); }
  int length() const {
    return 2 + static_cast<int>(day.size()) + static_cast<int>(night.size()) +
           (has_separator() ? 1 : 0);
  }

  friend bool operator==(const RouteString&, const RouteString&) = default;
};

// Tabu tenure round(sqrt(L)) and iteration cap ceil(sqrt(2 L)) for a string
// of length L, computed with exact integer arithmetic.
int tabu_tenure(int string_length);
int tabu_iteration_cap(int string_length);

// FIFO of per-iteration moved-location entries, at most `tenure` entries
// deep. One entry is recorded per move, so a moved id stays tabu for exactly
// the next `tenure` iterations.
class TabuState {
 public:
  explicit TabuState(int tenure) : tenure_(tenure) {}

  int tenure() const { return tenure_; }
  bool is_tabu(LocationId id) const;
  void record(std::span<const LocationId> moved);
  const std::deque<std::vector<LocationId>>& entries() const { return entries_; }

 private:
  int tenure_;
  std::deque<std::vector<LocationId>> entries_;
};

enum class TsMoveKind { node_swap, insert, two_opt };

struct TsMove {
  TsMoveKind kind = TsMoveKind::node_swap;
  // node_swap: positions a and b are exchanged.
  // insert: the customer at a moves so it ends up at position b of segment
  //         seg_b (index counted after removal).
  // two_opt: the segment slice [a, b] is reversed; seg_a == seg_b.
  int seg_a = 0;  // 0 = day segment, 1 = night segment
  int a = 0;
  int seg_b = 0;
  int b = 0;
  // Location ids recorded in the tabu list: both swap partners, the
  // relocated customer, or the endpoints of a reversed slice.
  std::array<LocationId, 2> moved{};
  int moved_count = 0;
};

// Every legal one-move change of the string: all node swaps, inserts
// (including across the recharge separator), and intra-segment 2-opt
// reversals. Moves are excluded when they would place a customer without
// night eligibility behind the separator or leave a night shift with an
// empty day segment.
std::vector<TsMove> enumerate_moves(const RouteString& route,
                                    std::span<const LocationId> ohd_eligible);

RouteString apply_move(const RouteString& route, const TsMove& move);

// Neighbor strings one move away, with tabu-listed moves
// removed unless they beat best_known (aspiration).
std::vector<RouteString> neighbors(const Instance& instance, const RouteString& route,
                                   std::span<const LocationId> ohd_eligible,
                                   const TabuState& tabu, Minutes best_known);

Minutes route_string_time(const Instance& instance, const RouteString& route);

// Plan view of a string; recharge time is set to the minimum the model
// requires for the chosen night segment.
TruckPlan to_truck_plan(const Instance& instance, const RouteString& route);

struct TsResult {
  RouteString route;
  Minutes day_time = 0;
  Minutes night_time = 0;
  bool feasible = true;
};

struct TsTraceStep {
  int iteration = 0;
  std::vector<LocationId> moved;
  bool aspiration = false;
  Minutes current_time = 0;
  Minutes best_time = 0;
  std::vector<std::vector<LocationId>> tabu_before;  // entries prior to the move
};

struct TsTrace {
  int string_length = 0;
  int tenure = 0;
  int iteration_cap = 0;
  Minutes initial_time = 0;
  std::vector<TsTraceStep> steps;
};

// Nearest-neighbor construction. Conventional trucks take every customer in
// the day segment; electric trucks insert each eligible customer into the
// night segment when that is strictly cheaper than the best day insertion.
RouteString initial_route(const Instance& instance, Engine engine,
                          std::span<const LocationId> customers,
                          std::span<const LocationId> ohd_eligible);

// Best-improvement tabu search from initial_route. Moves are scored by total
// travel time; the best feasible string seen is returned when one exists,
// otherwise the best string overall with the feasible flag cleared. The seed
// is accepted for interface stability; the search itself is deterministic.
// include_service_in_range switches feasibility to the shift-duration
// reading: drop-off time counts against the per-shift range budget.
TsResult tabu_search_route(const Instance& instance, Engine engine,
                           std::span<const LocationId> customers,
                           std::span<const LocationId> ohd_eligible, std::uint64_t seed,
                           TsTrace* trace = nullptr, bool include_service_in_range = false);

}  // namespace evrp

#include "evrp/ts.hpp"

#include <algorithm>
#include <limits>

#include "evrp/model.hpp"

namespace evrp {

namespace {

constexpr Minutes kInf = std::numeric_limits<Minutes>::max() / 4;

int isqrt(int value) {
  int s = 0;
  while ((s + 1) * (s + 1) <= value) ++s;
  return s;
}

}  // namespace

int tabu_tenure(int string_length) {
  // round(sqrt(L)) without floating point: round up exactly when the
  // fractional part of sqrt(L) reaches one half.
  const int s = isqrt(string_length);
  return string_length <= s * s + s ? s : s + 1;
}

int tabu_iteration_cap(int string_length) {
  // ceil(sqrt(2 L)): smallest k with k^2 >= 2 L.
  int k = isqrt(2 * string_length);
  if (k * k < 2 * string_length) ++k;
  return k;
}

bool TabuState::is_tabu(LocationId id) const {
  for (const auto& entry : entries_) {
    if (std::find(entry.begin(), entry.end(), id) != entry.end()) return true;
  }
  return false;
}

void TabuState::record(std::span<const LocationId> moved) {
  entries_.emplace_back(moved.begin(), moved.end());
  while (static_cast<int>(entries_.size()) > tenure_) entries_.pop_front();
}

Minutes route_string_time(const Instance& instance, const RouteString& route) {
  return route_travel_time(instance, route.day, Shift::day) +
         route_travel_time(instance, route.night, Shift::night);
}

TruckPlan to_truck_plan(const Instance& instance, const RouteString& route) {
  TruckPlan plan;
  plan.engine = route.engine;
  plan.day_route = route.day;
  plan.night_route = route.night;
  if (plan.engine == Engine::electric && !plan.night_route.empty()) {
    plan.recharge_time = required_recharge_time(instance, plan);
  }
  return plan;
}

namespace {

bool contains(std::span<const LocationId> ids, LocationId id) {
  return std::binary_search(ids.begin(), ids.end(), id);
}

const std::vector<LocationId>& segment(const RouteString& route, int seg) {
  return seg == 0 ? route.day : route.night;
}

std::vector<LocationId>& segment(RouteString& route, int seg) {
  return seg == 0 ? route.day : route.night;
}

void apply_move_into(const RouteString& route, const TsMove& move, RouteString& out) {
  out = route;
  switch (move.kind) {
    case TsMoveKind::node_swap:
      std::swap(segment(out, move.seg_a)[static_cast<std::size_t>(move.a)],
                segment(out, move.seg_b)[static_cast<std::size_t>(move.b)]);
      break;
    case TsMoveKind::insert: {
      auto& from = segment(out, move.seg_a);
      const LocationId customer = from[static_cast<std::size_t>(move.a)];
      from.erase(from.begin() + move.a);
      auto& to = segment(out, move.seg_b);
      to.insert(to.begin() + move.b, customer);
      break;
    }
    case TsMoveKind::two_opt: {
      auto& seg = segment(out, move.seg_a);
      std::reverse(seg.begin() + move.a, seg.begin() + move.b + 1);
      break;
    }
  }
}

}  // namespace

std::vector<TsMove> enumerate_moves(const RouteString& route,
                                    std::span<const LocationId> ohd_eligible) {
  std::vector<TsMove> moves;
  const auto day_size = static_cast<int>(route.day.size());
  const auto night_size = static_cast<int>(route.night.size());
  const bool electric = route.engine == Engine::electric;

  auto at = [&](int seg, int idx) { return segment(route, seg)[static_cast<std::size_t>(idx)]; };
  auto eligible = [&](LocationId id) { return contains(ohd_eligible, id); };
  auto seg_size = [&](int seg) { return seg == 0 ? day_size : night_size; };

  // Node swaps over all position pairs, (seg_a, a) before (seg_b, b).
  for (int seg_a = 0; seg_a <= 1; ++seg_a) {
    for (int a = 0; a < seg_size(seg_a); ++a) {
      for (int seg_b = seg_a; seg_b <= 1; ++seg_b) {
        for (int b = seg_b == seg_a ? a + 1 : 0; b < seg_size(seg_b); ++b) {
          if (seg_a != seg_b && !eligible(at(seg_a, a))) continue;  // a moves into night
          TsMove move{TsMoveKind::node_swap, seg_a, a, seg_b, b, {at(seg_a, a), at(seg_b, b)}, 2};
          moves.push_back(move);
        }
      }
    }
  }

  // Inserts, including across the recharge separator.
  for (int seg_a = 0; seg_a <= 1; ++seg_a) {
    for (int a = 0; a < seg_size(seg_a); ++a) {
      const LocationId customer = at(seg_a, a);
      for (int seg_b = 0; seg_b <= (electric ? 1 : 0); ++seg_b) {
        if (seg_b == 1 && !eligible(customer)) continue;
        // Removing the last day customer while night operations remain (or
        // begin) would leave a night shift without a day departure.
        if (seg_a == 0 && day_size == 1 && (night_size > 0 || seg_b == 1)) continue;
        const int slots = seg_size(seg_b) - (seg_a == seg_b ? 1 : 0);
        for (int b = 0; b <= slots; ++b) {
          if (seg_a == seg_b && (b == a || b == a + 1)) continue;  // identity
          // Position after removal.
          const int adjusted = (seg_a == seg_b && b > a) ? b - 1 : b;
          TsMove move{TsMoveKind::insert, seg_a, a, seg_b, adjusted, {customer, 0}, 1};
          moves.push_back(move);
        }
      }
    }
  }

  // 2-opt: reverse a slice within one shift segment.
  for (int seg = 0; seg <= 1; ++seg) {
    for (int a = 0; a + 1 < seg_size(seg); ++a) {
      for (int b = a + 1; b < seg_size(seg); ++b) {
        TsMove move{TsMoveKind::two_opt, seg, a, seg, b, {at(seg, a), at(seg, b)}, 2};
        moves.push_back(move);
      }
    }
  }

  return moves;
}

RouteString apply_move(const RouteString& route, const TsMove& move) {
  RouteString out;
  apply_move_into(route, move, out);
  return out;
}

std::vector<RouteString> neighbors(const Instance& instance, const RouteString& route,
                                   std::span<const LocationId> ohd_eligible,
                                   const TabuState& tabu, Minutes best_known) {
  std::vector<RouteString> result;
  for (const TsMove& move : enumerate_moves(route, ohd_eligible)) {
    RouteString candidate = apply_move(route, move);
    bool blocked = false;
    for (int i = 0; i < move.moved_count; ++i) {
      if (tabu.is_tabu(move.moved[static_cast<std::size_t>(i)])) blocked = true;
    }
    if (blocked && route_string_time(instance, candidate) >= best_known) continue;
    result.push_back(std::move(candidate));
  }
  return result;
}

RouteString initial_route(const Instance& instance, Engine engine,
                          std::span<const LocationId> customers,
                          std::span<const LocationId> ohd_eligible) {
  RouteString route;
  route.engine = engine;
  if (customers.empty()) return route;

  std::vector<LocationId> sorted(customers.begin(), customers.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<LocationId> night_pool;
  std::vector<LocationId> day_pool;
  for (LocationId c : sorted) {
    if (engine == Engine::electric && contains(ohd_eligible, c)) {
      night_pool.push_back(c);
    } else {
      day_pool.push_back(c);
    }
  }

  // Nearest neighbor over the day pool.
  LocationId current = instance.depot;
  std::vector<bool> used(day_pool.size(), false);
  for (std::size_t step = 0; step < day_pool.size(); ++step) {
    int best = -1;
    Minutes best_time = kInf;
    for (std::size_t i = 0; i < day_pool.size(); ++i) {
      if (used[i]) continue;
      const Minutes t = instance.travel_day(current, day_pool[i]);
      if (t < best_time) {
        best_time = t;
        best = static_cast<int>(i);
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    route.day.push_back(day_pool[static_cast<std::size_t>(best)]);
    current = day_pool[static_cast<std::size_t>(best)];
  }

  // Eligible customers join the night segment when the cheapest night
  // insertion strictly beats the cheapest day insertion.
  auto cheapest_insertion = [&](const std::vector<LocationId>& seg, LocationId c,
                                const TravelMatrix& matrix) {
    Minutes best_delta = kInf;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos <= seg.size(); ++pos) {
      const LocationId prev = pos == 0 ? instance.depot : seg[pos - 1];
      const LocationId next = pos == seg.size() ? instance.depot : seg[pos];
      const Minutes delta = matrix(prev, c) + matrix(c, next) - matrix(prev, next);
      if (delta < best_delta) {
        best_delta = delta;
        best_pos = pos;
      }
    }
    return std::pair<Minutes, std::size_t>{best_delta, best_pos};
  };

  for (LocationId c : night_pool) {
    const auto [day_delta, day_pos] = cheapest_insertion(route.day, c, instance.travel_day);
    const auto [night_delta, night_pos] =
        cheapest_insertion(route.night, c, instance.travel_night);
    if (night_delta < day_delta) {
      route.night.insert(route.night.begin() + static_cast<std::ptrdiff_t>(night_pos), c);
    } else {
      route.day.insert(route.day.begin() + static_cast<std::ptrdiff_t>(day_pos), c);
    }
  }

  return route;
}

namespace {

bool string_feasible(const Instance& instance, const RouteString& route,
                     bool include_service_in_range) {
  const TruckPlan plan = to_truck_plan(instance, route);
  return check_capacity(instance, plan).empty() &&
         check_range(instance, plan, 0, include_service_in_range).empty();
}

// Feasibility completion before the search starts: while the day shift
// breaks capacity or range, shift the eligible day customer whose move costs
// the least travel into the night segment; symmetrically drain an overloaded
// night shift back into the day. Bounded so an unrepairable string (total
// volume beyond both shifts) terminates and stays flagged infeasible.
void repair_string(const Instance& instance, RouteString& route,
                   std::span<const LocationId> eligible, bool include_service_in_range) {
  if (route.engine != Engine::electric) return;
  const std::int64_t cap = instance.capacity(Engine::electric);
  const Minutes range = instance.range(Engine::electric);

  // A night shift needs a day departure; promote the night customer whose
  // move costs the least travel, ties to the lowest id.
  if (route.day.empty() && !route.night.empty()) {
    std::size_t best_index = 0;
    Minutes best_total = std::numeric_limits<Minutes>::max();
    for (std::size_t i = 0; i < route.night.size(); ++i) {
      RouteString trial = route;
      trial.day.push_back(trial.night[i]);
      trial.night.erase(trial.night.begin() + static_cast<std::ptrdiff_t>(i));
      const Minutes total = route_string_time(instance, trial);
      if (total < best_total ||
          (total == best_total && route.night[i] < route.night[best_index])) {
        best_total = total;
        best_index = i;
      }
    }
    route.day.push_back(route.night[best_index]);
    route.night.erase(route.night.begin() + static_cast<std::ptrdiff_t>(best_index));
  }

  auto cheapest_slot = [&](const std::vector<LocationId>& seg, LocationId c,
                           const TravelMatrix& matrix) {
    Minutes best_delta = std::numeric_limits<Minutes>::max();
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos <= seg.size(); ++pos) {
      const LocationId prev = pos == 0 ? instance.depot : seg[pos - 1];
      const LocationId next = pos == seg.size() ? instance.depot : seg[pos];
      const Minutes delta = matrix(prev, c) + matrix(c, next) - matrix(prev, next);
      if (delta < best_delta) {
        best_delta = delta;
        best_pos = pos;
      }
    }
    return std::pair<Minutes, std::size_t>{best_delta, best_pos};
  };

  int budget = 2 * static_cast<int>(route.day.size() + route.night.size()) + 4;
  while (budget-- > 0) {
    const std::int64_t day_load = route_load(instance, route.day);
    const std::int64_t night_load = route_load(instance, route.night);
    const Minutes day_time = route_travel_time(instance, route.day, Shift::day);
    const Minutes night_time = route_travel_time(instance, route.night, Shift::night);
    const Minutes day_budget =
        day_time + (include_service_in_range ? route_service_time(instance, route.day) : 0);
    const Minutes night_budget =
        night_time +
        (include_service_in_range ? route_service_time(instance, route.night) : 0);

    if ((day_load > cap || day_budget > range) && route.day.size() > 1) {
      // Move one eligible day customer behind the separator.
      std::size_t best_index = route.day.size();
      std::size_t best_slot = 0;
      Minutes best_total = std::numeric_limits<Minutes>::max();
      for (std::size_t i = 0; i < route.day.size(); ++i) {
        const LocationId c = route.day[i];
        if (!contains(eligible, c)) continue;
        const LocationId prev = i == 0 ? instance.depot : route.day[i - 1];
        const LocationId next = i + 1 == route.day.size() ? instance.depot : route.day[i + 1];
        const Minutes removal = instance.travel_day(prev, next) - instance.travel_day(prev, c) -
                                instance.travel_day(c, next);
        const auto [insertion, slot] = cheapest_slot(route.night, c, instance.travel_night);
        const Minutes total = day_time + night_time + removal + insertion;
        if (total < best_total ||
            (total == best_total && best_index < route.day.size() &&
             c < route.day[best_index])) {
          best_total = total;
          best_index = i;
          best_slot = slot;
        }
      }
      if (best_index == route.day.size()) break;  // nothing eligible left
      const LocationId c = route.day[best_index];
      route.day.erase(route.day.begin() + static_cast<std::ptrdiff_t>(best_index));
      route.night.insert(route.night.begin() + static_cast<std::ptrdiff_t>(best_slot), c);
      continue;
    }

    if ((night_load > cap || night_budget > range) && !route.night.empty()) {
      std::size_t best_index = 0;
      std::size_t best_slot = 0;
      Minutes best_total = std::numeric_limits<Minutes>::max();
      for (std::size_t i = 0; i < route.night.size(); ++i) {
        const LocationId c = route.night[i];
        const LocationId prev = i == 0 ? instance.depot : route.night[i - 1];
        const LocationId next =
            i + 1 == route.night.size() ? instance.depot : route.night[i + 1];
        const Minutes removal = instance.travel_night(prev, next) -
                                instance.travel_night(prev, c) - instance.travel_night(c, next);
        const auto [insertion, slot] = cheapest_slot(route.day, c, instance.travel_day);
        const Minutes total = day_time + night_time + removal + insertion;
        if (total < best_total || (total == best_total && c < route.night[best_index])) {
          best_total = total;
          best_index = i;
          best_slot = slot;
        }
      }
      const LocationId c = route.night[best_index];
      route.night.erase(route.night.begin() + static_cast<std::ptrdiff_t>(best_index));
      route.day.insert(route.day.begin() + static_cast<std::ptrdiff_t>(best_slot), c);
      continue;
    }

    break;
  }
}

}  // namespace

TsResult tabu_search_route(const Instance& instance, Engine engine,
                           std::span<const LocationId> customers,
                           std::span<const LocationId> ohd_eligible,
                           [[maybe_unused]] std::uint64_t seed, TsTrace* trace,
                           bool include_service_in_range) {
  TsResult result;
  result.route.engine = engine;
  if (customers.empty()) {
    if (trace) {
      trace->string_length = 2;
      trace->tenure = tabu_tenure(2);
      trace->iteration_cap = tabu_iteration_cap(2);
      trace->initial_time = 0;
    }
    return result;
  }

  std::vector<LocationId> eligible(ohd_eligible.begin(), ohd_eligible.end());
  std::sort(eligible.begin(), eligible.end());

  RouteString current = initial_route(instance, engine, customers, eligible);
  repair_string(instance, current, eligible, include_service_in_range);
  const int length = current.length();
  const int tenure = tabu_tenure(length);
  const int cap = tabu_iteration_cap(length);

  Minutes current_time = route_string_time(instance, current);

  struct Tracked {
    RouteString route;
    Minutes time = kInf;
    bool valid = false;
  };
  Tracked best_any{current, current_time, true};
  Tracked best_feasible;
  if (string_feasible(instance, current, include_service_in_range)) {
    best_feasible = {current, current_time, true};
  }

  if (trace) {
    trace->string_length = length;
    trace->tenure = tenure;
    trace->iteration_cap = cap;
    trace->initial_time = current_time;
    trace->steps.clear();
  }

  TabuState tabu(tenure);
  RouteString scratch;

  for (int iteration = 1; iteration <= cap; ++iteration) {
    const std::vector<TsMove> moves = enumerate_moves(current, eligible);
    int best_move = -1;
    Minutes best_move_time = kInf;
    bool best_move_aspiration = false;
    for (std::size_t i = 0; i < moves.size(); ++i) {
      const TsMove& move = moves[i];
      bool blocked = false;
      for (int j = 0; j < move.moved_count; ++j) {
        if (tabu.is_tabu(move.moved[static_cast<std::size_t>(j)])) blocked = true;
      }
      apply_move_into(current, move, scratch);
      const Minutes time = route_string_time(instance, scratch);
      if (blocked && time >= best_any.time) continue;  // aspiration gate
      if (time < best_move_time) {
        best_move_time = time;
        best_move = static_cast<int>(i);
        best_move_aspiration = blocked;
      }
    }
    if (best_move < 0) break;

    const TsMove& chosen = moves[static_cast<std::size_t>(best_move)];
    if (trace) {
      TsTraceStep step;
      step.iteration = iteration;
      step.moved.assign(chosen.moved.begin(), chosen.moved.begin() + chosen.moved_count);
      step.aspiration = best_move_aspiration;
      step.tabu_before.assign(tabu.entries().begin(), tabu.entries().end());
      trace->steps.push_back(std::move(step));
    }

    apply_move_into(current, chosen, scratch);
    current = scratch;
    current_time = best_move_time;
    tabu.record(std::span<const LocationId>(chosen.moved.data(),
                                            static_cast<std::size_t>(chosen.moved_count)));

    if (current_time < best_any.time) best_any = {current, current_time, true};
    if (string_feasible(instance, current, include_service_in_range) &&
        (!best_feasible.valid || current_time < best_feasible.time)) {
      best_feasible = {current, current_time, true};
    }

    if (trace) {
      trace->steps.back().current_time = current_time;
      trace->steps.back().best_time = best_any.time;
    }
  }

  const Tracked& chosen = best_feasible.valid ? best_feasible : best_any;
  result.route = chosen.route;
  result.day_time = route_travel_time(instance, result.route.day, Shift::day);
  result.night_time = route_travel_time(instance, result.route.night, Shift::night);
  result.feasible = string_feasible(instance, result.route, include_service_in_range);
  return result;
}

}  // namespace evrp

#include "evrp/vns.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "evrp/model.hpp"
#include "evrp/rng.hpp"
#include "evrp/threading.hpp"

namespace evrp {

std::string to_string(Structure structure) {
  switch (structure) {
    case Structure::one_insert:
      return "1-insert";
    case Structure::one_swap:
      return "1-swap";
    case Structure::two_insert:
      return "2-insert";
    case Structure::type_change:
      return "type-change";
    case Structure::route_insert:
      return "route-insert";
    case Structure::route_delete:
      return "route-delete";
  }
  return "unknown";
}

int UpperSolution::assigned_count() const {
  int count = 0;
  for (const UpperTruck& truck : trucks) {
    if (truck.assigned()) ++count;
  }
  return count;
}

int UpperSolution::assigned_count(TruckStatus status) const {
  int count = 0;
  for (const UpperTruck& truck : trucks) {
    if (truck.status == status) ++count;
  }
  return count;
}

namespace {

void sorted_insert(std::vector<LocationId>& ids, LocationId id) {
  ids.insert(std::upper_bound(ids.begin(), ids.end(), id), id);
}

void sorted_erase(std::vector<LocationId>& ids, LocationId id) {
  const auto it = std::lower_bound(ids.begin(), ids.end(), id);
  ids.erase(it);
}

void evaluate_truck(const Instance& instance, UpperTruck& truck,
                    bool include_service_in_range) {
  if (truck.assigned() && truck.customers.empty()) {
    truck.status = TruckStatus::unassigned;
  }
  if (!truck.assigned()) {
    truck.eval = TsResult{};
    truck.violation = 0;
    return;
  }
  std::vector<LocationId> eligible;
  if (truck.status == TruckStatus::electric) {
    for (LocationId c : truck.customers) {
      if (instance.is_ohd(c)) eligible.push_back(c);
    }
  }
  truck.eval = tabu_search_route(instance, truck.engine(), truck.customers, eligible, 0,
                                 nullptr, include_service_in_range);

  const TruckPlan plan = to_truck_plan(instance, truck.eval.route);
  std::int64_t magnitude = 0;
  for (const Violation& v : check_capacity(instance, plan)) magnitude += v.magnitude;
  for (const Violation& v : check_range(instance, plan, 0, include_service_in_range)) {
    magnitude += v.magnitude;
  }
  truck.violation = magnitude;
}

// Medoid of a customer set: the member minimizing total daytime travel from
// all members, ties to the lowest id.
LocationId set_medoid(const Instance& instance, std::span<const LocationId> customers) {
  LocationId best = customers.front();
  Minutes best_total = std::numeric_limits<Minutes>::max();
  for (LocationId m : customers) {
    Minutes total = 0;
    for (LocationId c : customers) total += instance.travel_day(c, m);
    if (total < best_total || (total == best_total && m < best)) {
      best_total = total;
      best = m;
    }
  }
  return best;
}

std::size_t slot_count(const Instance& instance) {
  const auto n = static_cast<int>(instance.customer_count());
  return static_cast<std::size_t>(std::min(instance.trucks.max_conventional, n) +
                                  std::min(instance.trucks.max_electric, n));
}

struct CandidateKey {
  std::int64_t violation;
  std::array<std::int64_t, 2> score_key;

  friend bool operator<(const CandidateKey& a, const CandidateKey& b) {
    if (a.violation != b.violation) return a.violation < b.violation;
    return a.score_key < b.score_key;
  }
};

CandidateKey key_of(const UpperSolution& solution) {
  return {solution.total_violation, solution.score.key()};
}

// One upper-level move, cheap to enumerate; applied and priced lazily.
struct Move {
  Structure structure;
  int truck_a = -1;
  int truck_b = -1;
  LocationId customer_a = -1;
  LocationId customer_b = -1;
  TruckStatus new_status = TruckStatus::unassigned;
};

// Applies the move and returns the slots whose customer sets changed.
std::vector<int> apply_upper_move(const Instance& instance, UpperSolution& solution,
                                  const Move& move) {
  switch (move.structure) {
    case Structure::one_insert: {
      sorted_erase(solution.trucks[move.truck_a].customers, move.customer_a);
      sorted_insert(solution.trucks[move.truck_b].customers, move.customer_a);
      return {move.truck_a, move.truck_b};
    }
    case Structure::one_swap: {
      sorted_erase(solution.trucks[move.truck_a].customers, move.customer_a);
      sorted_insert(solution.trucks[move.truck_a].customers, move.customer_b);
      sorted_erase(solution.trucks[move.truck_b].customers, move.customer_b);
      sorted_insert(solution.trucks[move.truck_b].customers, move.customer_a);
      return {move.truck_a, move.truck_b};
    }
    case Structure::two_insert: {
      sorted_erase(solution.trucks[move.truck_a].customers, move.customer_a);
      sorted_erase(solution.trucks[move.truck_a].customers, move.customer_b);
      sorted_insert(solution.trucks[move.truck_b].customers, move.customer_a);
      sorted_insert(solution.trucks[move.truck_b].customers, move.customer_b);
      return {move.truck_a, move.truck_b};
    }
    case Structure::type_change: {
      solution.trucks[move.truck_a].status = move.new_status;
      return {move.truck_a};
    }
    case Structure::route_insert: {
      sorted_erase(solution.trucks[move.truck_a].customers, move.customer_a);
      UpperTruck& target = solution.trucks[move.truck_b];
      target.status = move.new_status;
      target.customers = {move.customer_a};
      return {move.truck_a, move.truck_b};
    }
    case Structure::route_delete: {
      std::vector<int> changed{move.truck_a};
      // Receivers keyed by the pre-move medoids of the surviving trucks.
      std::vector<std::pair<int, LocationId>> medoids;
      for (std::size_t t = 0; t < solution.trucks.size(); ++t) {
        if (static_cast<int>(t) == move.truck_a) continue;
        const UpperTruck& truck = solution.trucks[t];
        if (!truck.assigned() || truck.customers.empty()) continue;
        medoids.emplace_back(static_cast<int>(t), set_medoid(instance, truck.customers));
      }
      UpperTruck& victim = solution.trucks[move.truck_a];
      for (LocationId c : victim.customers) {
        int best_truck = medoids.front().first;
        Minutes best_time = std::numeric_limits<Minutes>::max();
        for (const auto& [t, medoid] : medoids) {
          const Minutes time = instance.travel_day(c, medoid);
          if (time < best_time) {
            best_time = time;
            best_truck = t;
          }
        }
        sorted_insert(solution.trucks[best_truck].customers, c);
        if (std::find(changed.begin(), changed.end(), best_truck) == changed.end()) {
          changed.push_back(best_truck);
        }
      }
      victim.customers.clear();
      victim.status = TruckStatus::unassigned;
      return changed;
    }
  }
  return {};
}

}  // namespace

void refresh_objective(const Instance& instance, UpperSolution& solution) {
  Cost purchase = 0;
  Minutes travel = 0;
  std::int64_t violation = 0;
  std::vector<Minutes> recharges;
  int conventional = 0;
  int electric = 0;

  for (UpperTruck& truck : solution.trucks) {
    if (truck.assigned() && truck.customers.empty()) truck.status = TruckStatus::unassigned;
    if (!truck.assigned()) continue;
    if (truck.status == TruckStatus::conventional) {
      ++conventional;
    } else {
      ++electric;
    }
    travel += truck.eval.day_time + truck.eval.night_time;
    violation += truck.violation;
    if (truck.status == TruckStatus::electric && !truck.eval.route.night.empty()) {
      recharges.push_back(
          to_truck_plan(instance, truck.eval.route).recharge_time);
    }
  }

  solution.evse_count = required_evse_count(recharges, instance.charging.break_window);
  purchase = instance.costs.tco_conventional * conventional +
             instance.costs.tco_electric * electric +
             instance.costs.evse_cost * solution.evse_count;

  violation += std::max(0, conventional - instance.trucks.max_conventional);
  violation += std::max(0, electric - instance.trucks.max_electric);

  solution.score = Score{purchase, travel, instance.costs.objective_mode};
  solution.total_violation = violation;
}

UpperSolution initial_solution_by_clustering(const Instance& instance, std::uint64_t seed,
                                             bool include_service_in_range) {
  UpperSolution solution;
  solution.trucks.assign(slot_count(instance), UpperTruck{});

  const std::vector<LocationId> customers = instance.all_customers();
  if (customers.empty()) {
    refresh_objective(instance, solution);
    return solution;
  }

  const std::int64_t capacity = std::max<std::int64_t>(1, instance.trucks.capacity_conventional);
  int k = static_cast<int>((instance.total_volume() + capacity - 1) / capacity);
  k = std::clamp(k, 1, static_cast<int>(customers.size()));
  k = std::min(k, static_cast<int>(solution.trucks.size()));

  Rng rng(seed);
  std::vector<LocationId> pool = customers;
  rng.shuffle(pool);
  std::vector<LocationId> medoids(pool.begin(), pool.begin() + k);
  std::sort(medoids.begin(), medoids.end());

  std::vector<int> assignment(customers.size(), 0);
  for (int round = 0; round < 50; ++round) {
    for (std::size_t i = 0; i < customers.size(); ++i) {
      int best = 0;
      Minutes best_time = std::numeric_limits<Minutes>::max();
      for (std::size_t j = 0; j < medoids.size(); ++j) {
        const Minutes t = instance.travel_day(customers[i], medoids[j]);
        if (t < best_time || (t == best_time && medoids[j] < medoids[static_cast<std::size_t>(best)])) {
          best_time = t;
          best = static_cast<int>(j);
        }
      }
      assignment[i] = best;
    }

    std::vector<std::vector<LocationId>> clusters(medoids.size());
    for (std::size_t i = 0; i < customers.size(); ++i) {
      clusters[static_cast<std::size_t>(assignment[i])].push_back(customers[i]);
    }
    std::vector<LocationId> updated;
    for (const auto& cluster : clusters) {
      if (cluster.empty()) continue;  // dead medoid
      updated.push_back(set_medoid(instance, cluster));
    }
    std::sort(updated.begin(), updated.end());
    if (updated == medoids) break;
    medoids = std::move(updated);
  }

  std::vector<std::vector<LocationId>> clusters(medoids.size());
  for (std::size_t i = 0; i < customers.size(); ++i) {
    int best = 0;
    Minutes best_time = std::numeric_limits<Minutes>::max();
    for (std::size_t j = 0; j < medoids.size(); ++j) {
      const Minutes t = instance.travel_day(customers[i], medoids[j]);
      if (t < best_time || (t == best_time && medoids[j] < medoids[static_cast<std::size_t>(best)])) {
        best_time = t;
        best = static_cast<int>(j);
      }
    }
    clusters[static_cast<std::size_t>(best)].push_back(customers[i]);
  }

  std::size_t slot = 0;
  for (auto& cluster : clusters) {
    if (cluster.empty() || slot >= solution.trucks.size()) continue;
    UpperTruck& truck = solution.trucks[slot++];
    truck.status = TruckStatus::conventional;
    truck.customers = std::move(cluster);
  }

  for (UpperTruck& truck : solution.trucks) {
    evaluate_truck(instance, truck, include_service_in_range);
  }
  refresh_objective(instance, solution);
  return solution;
}

std::vector<int> shake_priority(std::size_t truck_count, std::uint64_t seed) {
  std::vector<int> priority(truck_count);
  for (std::size_t i = 0; i < truck_count; ++i) priority[i] = static_cast<int>(i);
  Rng rng(seed);
  rng.shuffle(priority);
  return priority;
}

std::vector<UpperSolution> neighborhood_set(const Instance& instance,
                                            const UpperSolution& solution,
                                            Structure structure, std::span<const int> priority,
                                            int cap, int threads, int source_limit,
                                            bool include_service_in_range) {
  std::vector<Move> moves;
  const int conventional = solution.assigned_count(TruckStatus::conventional);
  const int electric = solution.assigned_count(TruckStatus::electric);
  const int assigned = conventional + electric;

  const auto truck = [&](int index) -> const UpperTruck& {
    return solution.trucks[static_cast<std::size_t>(index)];
  };
  const auto capped = [&]() { return static_cast<int>(moves.size()) >= cap; };

  int sources_used = 0;
  auto source_budget_left = [&]() {
    return source_limit <= 0 || sources_used < source_limit;
  };

  switch (structure) {
    case Structure::one_insert: {
      for (int a : priority) {
        if (capped() || !source_budget_left()) break;
        if (!truck(a).assigned()) continue;
        ++sources_used;
        for (int b : priority) {
          if (capped()) break;
          if (b == a || !truck(b).assigned()) continue;
          for (LocationId c : truck(a).customers) {
            if (capped()) break;
            moves.push_back({Structure::one_insert, a, b, c, -1, TruckStatus::unassigned});
          }
        }
      }
      break;
    }
    case Structure::one_swap: {
      for (std::size_t pa = 0; pa < priority.size(); ++pa) {
        const int a = priority[pa];
        if (capped() || !source_budget_left()) break;
        if (!truck(a).assigned()) continue;
        ++sources_used;
        for (std::size_t pb = pa + 1; pb < priority.size(); ++pb) {
          const int b = priority[pb];
          if (capped()) break;
          if (!truck(b).assigned()) continue;
          for (LocationId ca : truck(a).customers) {
            if (capped()) break;
            for (LocationId cb : truck(b).customers) {
              if (capped()) break;
              moves.push_back({Structure::one_swap, a, b, ca, cb, TruckStatus::unassigned});
            }
          }
        }
      }
      break;
    }
    case Structure::two_insert: {
      for (int a : priority) {
        if (capped() || !source_budget_left()) break;
        if (!truck(a).assigned() || truck(a).customers.size() < 2) continue;
        ++sources_used;
        for (int b : priority) {
          if (capped()) break;
          if (b == a || !truck(b).assigned()) continue;
          const auto& ids = truck(a).customers;
          for (std::size_t i = 0; i < ids.size() && !capped(); ++i) {
            for (std::size_t j = i + 1; j < ids.size() && !capped(); ++j) {
              moves.push_back(
                  {Structure::two_insert, a, b, ids[i], ids[j], TruckStatus::unassigned});
            }
          }
        }
      }
      break;
    }
    case Structure::type_change: {
      for (int a : priority) {
        if (capped() || !source_budget_left()) break;
        if (!truck(a).assigned()) continue;
        ++sources_used;
        if (truck(a).status == TruckStatus::conventional) {
          if (electric + 1 <= instance.trucks.max_electric) {
            moves.push_back(
                {Structure::type_change, a, -1, -1, -1, TruckStatus::electric});
          }
        } else if (conventional + 1 <= instance.trucks.max_conventional) {
          moves.push_back(
              {Structure::type_change, a, -1, -1, -1, TruckStatus::conventional});
        }
      }
      break;
    }
    case Structure::route_insert: {
      int target = -1;
      for (std::size_t t = 0; t < solution.trucks.size(); ++t) {
        if (!solution.trucks[t].assigned()) {
          target = static_cast<int>(t);
          break;
        }
      }
      if (target < 0) break;
      for (const TruckStatus status : {TruckStatus::conventional, TruckStatus::electric}) {
        const int bound = status == TruckStatus::conventional
                              ? instance.trucks.max_conventional - conventional
                              : instance.trucks.max_electric - electric;
        if (bound < 1) continue;
        sources_used = 0;
        for (int a : priority) {
          if (capped() || !source_budget_left()) break;
          if (a == target || !truck(a).assigned()) continue;
          ++sources_used;
          for (LocationId c : truck(a).customers) {
            if (capped()) break;
            moves.push_back({Structure::route_insert, a, target, c, -1, status});
          }
        }
      }
      break;
    }
    case Structure::route_delete: {
      if (assigned < 2) break;
      for (int a : priority) {
        if (capped() || !source_budget_left()) break;
        if (!truck(a).assigned()) continue;
        ++sources_used;
        moves.push_back({Structure::route_delete, a, -1, -1, -1, TruckStatus::unassigned});
      }
      break;
    }
  }

  std::vector<UpperSolution> candidates(moves.size());
  parallel_for(moves.size(), threads, [&](std::size_t i) {
    UpperSolution candidate = solution;
    const std::vector<int> changed = apply_upper_move(instance, candidate, moves[i]);
    for (int t : changed) {
      evaluate_truck(instance, candidate.trucks[static_cast<std::size_t>(t)],
                     include_service_in_range);
    }
    refresh_objective(instance, candidate);
    candidates[i] = std::move(candidate);
  });
  return candidates;
}

Solution to_solution(const Instance& instance, const UpperSolution& upper) {
  Solution solution;
  std::vector<Minutes> recharges;
  for (const UpperTruck& truck : upper.trucks) {
    if (!truck.assigned()) continue;
    TruckPlan plan = to_truck_plan(instance, truck.eval.route);
    if (plan.engine == Engine::electric && !plan.night_route.empty()) {
      recharges.push_back(plan.recharge_time);
    }
    solution.trucks.push_back(std::move(plan));
  }
  solution.evse_count = required_evse_count(recharges, instance.charging.break_window);
  return solution;
}

VnsResult vns_solve(const Instance& instance, const VnsConfig& config, VnsTrace* trace) {
  {
    std::array<int, 6> seen{};
    for (Structure s : config.order) seen[static_cast<std::size_t>(s)] += 1;
    for (int count : seen) {
      if (count != 1) {
        throw std::invalid_argument("vns config: order must be a permutation of the six structures");
      }
    }
    if (config.neighborhood_cap < 1) {
      throw std::invalid_argument("vns config: neighborhood_cap must be >= 1");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  const auto out_of_time = [&]() {
    return std::chrono::steady_clock::now() - start >= config.max_computation_time;
  };

  Rng rng(config.seed);
  UpperSolution incumbent = initial_solution_by_clustering(instance, rng.next_u64(),
                                                           config.include_service_in_range);

  VnsResult result;
  int structure_index = 0;
  int stall = 0;
  bool improved_in_cycle = false;

  while (!out_of_time()) {
    if (structure_index == static_cast<int>(config.order.size())) {
      ++result.cycles;
      if (improved_in_cycle) {
        stall = 0;
      } else if (++stall >= config.stall_cycles) {
        break;
      }
      improved_in_cycle = false;
      structure_index = 0;
    }

    const Structure structure = config.order[static_cast<std::size_t>(structure_index)];
    const std::vector<int> priority = shake_priority(incumbent.trucks.size(), rng.next_u64());
    const std::vector<UpperSolution> candidates =
        neighborhood_set(instance, incumbent, structure, priority, config.neighborhood_cap,
                         config.threads, config.shake_intensity,
                         config.include_service_in_range);
    result.candidates_evaluated += candidates.size();

    int best = -1;
    if (incumbent.feasible()) {
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i].feasible()) continue;
        if (best < 0 || candidates[i].score < candidates[static_cast<std::size_t>(best)].score) {
          best = static_cast<int>(i);
        }
      }
    } else {
      // Repair: drive the violation down first, objective second.
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (best < 0 ||
            key_of(candidates[i]) < key_of(candidates[static_cast<std::size_t>(best)])) {
          best = static_cast<int>(i);
        }
      }
    }

    const bool accepted =
        best >= 0 && key_of(candidates[static_cast<std::size_t>(best)]) < key_of(incumbent);
    if (trace) {
      trace->steps.push_back({structure_index, accepted,
                              accepted ? candidates[static_cast<std::size_t>(best)].score
                                       : incumbent.score,
                              accepted ? candidates[static_cast<std::size_t>(best)].total_violation
                                       : incumbent.total_violation});
    }
    if (accepted) {
      incumbent = candidates[static_cast<std::size_t>(best)];
      ++result.accepted_moves;
      improved_in_cycle = true;
      structure_index = 0;
      if (trace) trace->incumbents.push_back(incumbent);
    } else {
      ++structure_index;
    }
  }

  result.solution = to_solution(instance, incumbent);
  result.score = scalar_objective(instance, result.solution, instance.costs);
  result.violations = validate(instance, result.solution, config.include_service_in_range);
  result.feasible = result.violations.empty();
  return result;
}

}  // namespace evrp

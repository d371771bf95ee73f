#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <vector>

#include "evrp/instance.hpp"
#include "evrp/solution.hpp"
#include "evrp/ts.hpp"
#include "evrp/types.hpp"

namespace evrp {

// Upper-level neighborhood structures, ordered from the smallest change to
// the biggest.
enum class Structure {
  one_insert,
  one_swap,
  two_insert,
  type_change,
  route_insert,
  route_delete,
};

std::string to_string(Structure structure);

enum class TruckStatus { unassigned, conventional, electric };

struct UpperTruck {
  TruckStatus status = TruckStatus::unassigned;
  std::vector<LocationId> customers;  // sorted
  TsResult eval;                      // lower-level result for `customers`
  std::int64_t violation = 0;         // capacity + range excess, minutes/orders

  bool assigned() const { return status != TruckStatus::unassigned; }
  Engine engine() const {
    return status == TruckStatus::electric ? Engine::electric : Engine::conventional;
  }
};

// Assignment vector plus cached lower-level results and objectives. The
// customer sets of assigned trucks always partition the customer set.
struct UpperSolution {
  std::vector<UpperTruck> trucks;
  Score score{};
  std::int64_t total_violation = 0;  // truck violations + fleet bound excess
  int evse_count = 0;

  bool feasible() const { return total_violation == 0; }
  int assigned_count() const;
  int assigned_count(TruckStatus status) const;
};

struct VnsConfig {
  std::chrono::milliseconds max_computation_time{10'000};
  std::array<Structure, 6> order{Structure::one_insert,   Structure::one_swap,
                                 Structure::two_insert,   Structure::type_change,
                                 Structure::route_insert, Structure::route_delete};
  // Number of top-priority trucks used as move sources per shake.
  int shake_intensity = 4;
  // Candidate cap per neighborhood structure.
  int neighborhood_cap = 200;
  // Consecutive full structure cycles without improvement before stopping;
  // keeps results wall-clock independent when the time budget is generous.
  int stall_cycles = 50;
  std::uint64_t seed = 1;
  int threads = 1;
  // Shift-duration feasibility: drop-off time counts against the per-shift
  // range budget (the validator's include_service_in_range reading).
  bool include_service_in_range = false;
};

struct VnsStep {
  int structure_index = 0;  // position in config.order
  bool accepted = false;
  Score incumbent_score{};
  std::int64_t incumbent_violation = 0;
};

struct VnsTrace {
  std::vector<VnsStep> steps;          // one entry per examined structure
  std::vector<UpperSolution> incumbents;  // snapshot after each acceptance
};

struct VnsResult {
  Solution solution;
  Score score{};
  bool feasible = false;
  std::vector<Violation> violations;  // empty when feasible
  std::uint64_t candidates_evaluated = 0;
  std::uint64_t accepted_moves = 0;
  std::uint64_t cycles = 0;
};

// k-medoid seeding: the minimum conventional fleet that covers the total
// volume, one cluster per truck, routes completed by the lower level.
// Constraint checks are deliberately skipped here.
UpperSolution initial_solution_by_clustering(const Instance& instance, std::uint64_t seed,
                                             bool include_service_in_range = false);

// Seeded random truck priority used by the shake step. Does not modify the
// solution; it only reorders which trucks the neighborhood samples first.
std::vector<int> shake_priority(std::size_t truck_count, std::uint64_t seed);

// Candidates differing from `solution` by exactly one move of `structure`,
// generated in priority order up to `cap`, with changed trucks re-evaluated
// by the lower level.
std::vector<UpperSolution> neighborhood_set(const Instance& instance,
                                            const UpperSolution& solution,
                                            Structure structure, std::span<const int> priority,
                                            int cap, int threads = 1, int source_limit = 0,
                                            bool include_service_in_range = false);

// Re-derives score, violations, and EVSE count from the cached lower-level
// results.
void refresh_objective(const Instance& instance, UpperSolution& solution);

Solution to_solution(const Instance& instance, const UpperSolution& upper);

VnsResult vns_solve(const Instance& instance, const VnsConfig& config,
                    VnsTrace* trace = nullptr);

}  // namespace evrp

#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "evrp/instance.hpp"
#include "evrp/model.hpp"
#include "evrp/solution.hpp"

namespace evrp {

// Enumeration is exponential in the customer count; 12 is the hard cap.
inline constexpr int kExactCustomerHardCap = 12;

struct ExactLimits {
  int max_customers = 8;
  int max_trucks = 4;
  std::chrono::milliseconds time_budget{60'000};
};

struct ExactResult {
  Solution solution;
  Score score;
  std::uint64_t configurations = 0;  // engine/partition configurations scored
};

// Minimum-duration depot-rooted loop over exactly the given customers under
// one shift's matrix, by subset dynamic programming. Ties resolve to the
// lexicographically smallest route. Throws LimitError beyond the hard cap.
std::pair<std::vector<LocationId>, Minutes> optimal_route(
    const Instance& instance, std::span<const LocationId> customers, Shift shift);

// Provably optimal solution by enumerating every partition of the customers
// into trucks, every engine assignment, and every day/night split of each
// electric truck. Ties break on fewer trucks, then the lexicographically
// smallest assignment. Throws LimitError when the instance exceeds the
// limits or the time budget, InfeasibleError when no assignment is feasible.
ExactResult solve_exact(const Instance& instance, const ExactLimits& limits = {});

}  // namespace evrp

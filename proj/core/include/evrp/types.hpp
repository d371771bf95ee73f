#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace evrp {

using LocationId = std::int32_t;
using Minutes = std::int64_t;
using Cost = std::int64_t;

enum class Engine { conventional, electric };
enum class Shift { day, night };
enum class ObjectiveMode { weighted_sum, lexicographic };

std::string to_string(Engine engine);
std::string to_string(Shift shift);
std::string to_string(ObjectiveMode mode);

// Ordered objective value. weighted_sum compares purchase + travel as a
// single number; lexicographic compares (purchase, travel) in that order.
// Comparing scores built under different modes is a programming error.
struct Score {
  Cost purchase = 0;
  Minutes travel = 0;
  ObjectiveMode mode = ObjectiveMode::weighted_sum;

  std::int64_t scalar() const { return purchase + travel; }
  std::array<std::int64_t, 2> key() const;
};

bool operator<(const Score& lhs, const Score& rhs);
bool operator>(const Score& lhs, const Score& rhs);
bool operator<=(const Score& lhs, const Score& rhs);
bool operator==(const Score& lhs, const Score& rhs);
bool operator!=(const Score& lhs, const Score& rhs);

std::string to_string(const Score& score);

}  // namespace evrp

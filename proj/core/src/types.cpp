#include "evrp/types.hpp"

#include <stdexcept>

namespace evrp {

std::string to_string(Engine engine) {
  return engine == Engine::conventional ? "conventional" : "electric";
}

std::string to_string(Shift shift) {
  return shift == Shift::day ? "day" : "night";
}

std::string to_string(ObjectiveMode mode) {
  return mode == ObjectiveMode::weighted_sum ? "weighted_sum" : "lexicographic";
}

std::array<std::int64_t, 2> Score::key() const {
  if (mode == ObjectiveMode::weighted_sum) {
    return {purchase + travel, 0};
  }
  return {purchase, travel};
}

namespace {

void require_same_mode(const Score& lhs, const Score& rhs) {
  if (lhs.mode != rhs.mode) {
    throw std::logic_error("comparing scores with different objective modes");
  }
}

}  // namespace

bool operator<(const Score& lhs, const Score& rhs) {
  require_same_mode(lhs, rhs);
  return lhs.key() < rhs.key();
}

bool operator>(const Score& lhs, const Score& rhs) { return rhs < lhs; }

bool operator<=(const Score& lhs, const Score& rhs) { return !(rhs < lhs); }

bool operator==(const Score& lhs, const Score& rhs) {
  require_same_mode(lhs, rhs);
  return lhs.key() == rhs.key();
}

bool operator!=(const Score& lhs, const Score& rhs) { return !(lhs == rhs); }

std::string to_string(const Score& score) {
  if (score.mode == ObjectiveMode::weighted_sum) {
    return std::to_string(score.scalar());
  }
  return "(" + std::to_string(score.purchase) + ", " + std::to_string(score.travel) + ")";
}

}  // namespace evrp

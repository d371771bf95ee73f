#pragma once

#include <cstdint>

#include "evrp/instance.hpp"

namespace evrp {

// Synthetic single-depot instances: seeded uniform customer points on a
// square whose side is measured in minutes of travel, depot at the center,
// integer-minute Euclidean day times, night times = day / speed_ratio_night.
struct GenParams {
  int customer_count = 20;
  double ohd_ratio = 0.0;  // share of customers allowing off-hour delivery
  std::uint64_t seed = 1;
  double plane_extent = 60.0;  // square side, minutes of travel
  double speed_ratio_night = 1.3;
  std::int64_t volume_min = 1;
  std::int64_t volume_max = 5;
  Minutes unit_dropoff = 2;  // service minutes per order unit

  // Fleet template. max_* of 0 means "enough": replaced by customer_count.
  FleetSpec fleet{0, 0, 140, 140, 720, 420};
  CostParams costs{1000, 950, 200, ObjectiveMode::weighted_sum};
  ChargingParams charging{7.0, 240};
};

Instance generate(const GenParams& params);

}  // namespace evrp

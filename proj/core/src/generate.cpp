#include "evrp/generate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evrp/rng.hpp"

namespace evrp {

Instance generate(const GenParams& params) {
  if (params.customer_count < 1) {
    throw std::invalid_argument("generate: customer_count must be >= 1");
  }
  if (params.ohd_ratio < 0.0 || params.ohd_ratio > 1.0) {
    throw std::invalid_argument("generate: ohd_ratio must lie in [0, 1]");
  }
  if (params.plane_extent <= 0.0) {
    throw std::invalid_argument("generate: plane_extent must be > 0");
  }
  if (params.speed_ratio_night <= 0.0) {
    throw std::invalid_argument("generate: speed_ratio_night must be > 0");
  }
  if (params.volume_min < 1 || params.volume_max < params.volume_min) {
    throw std::invalid_argument("generate: volume range must satisfy 1 <= min <= max");
  }
  if (params.unit_dropoff < 0) {
    throw std::invalid_argument("generate: unit_dropoff must be >= 0");
  }

  const int n = params.customer_count;
  const std::size_t locations = static_cast<std::size_t>(n) + 1;
  Rng rng(params.seed);

  // Location 0 is the depot at the square's center; customers are 1..n.
  std::vector<std::pair<double, double>> points(locations);
  points[0] = {params.plane_extent / 2.0, params.plane_extent / 2.0};
  for (std::size_t i = 1; i < locations; ++i) {
    points[i] = {rng.next_unit() * params.plane_extent, rng.next_unit() * params.plane_extent};
  }

  TravelMatrix day = TravelMatrix::zeros(locations);
  TravelMatrix night = TravelMatrix::zeros(locations);
  for (std::size_t i = 0; i < locations; ++i) {
    for (std::size_t j = 0; j < locations; ++j) {
      if (i == j) continue;
      const double dx = points[i].first - points[j].first;
      const double dy = points[i].second - points[j].second;
      const Minutes t = std::llround(std::sqrt(dx * dx + dy * dy));
      day(static_cast<LocationId>(i), static_cast<LocationId>(j)) = t;
      night(static_cast<LocationId>(i), static_cast<LocationId>(j)) =
          std::llround(static_cast<double>(t) / params.speed_ratio_night);
    }
  }

  std::vector<std::int64_t> volume(locations, 0);
  std::vector<Minutes> service(locations, 0);
  for (std::size_t i = 1; i < locations; ++i) {
    volume[i] = rng.next_int(params.volume_min, params.volume_max);
    service[i] = params.unit_dropoff * volume[i];
  }

  // Exactly round(ohd_ratio * n) customers allow off-hour delivery.
  const auto ohd_count =
      static_cast<std::size_t>(std::llround(params.ohd_ratio * static_cast<double>(n)));
  std::vector<LocationId> ids(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
  rng.shuffle(ids);
  std::vector<LocationId> ohd(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(ohd_count));
  std::vector<LocationId> day_only(ids.begin() + static_cast<std::ptrdiff_t>(ohd_count),
                                   ids.end());
  std::sort(ohd.begin(), ohd.end());
  std::sort(day_only.begin(), day_only.end());

  Instance instance;
  instance.depot = 0;
  instance.customers_day_only = std::move(day_only);
  instance.customers_ohd = std::move(ohd);
  instance.travel_day = std::move(day);
  instance.travel_night = std::move(night);
  instance.volume = std::move(volume);
  instance.service_time = std::move(service);
  instance.trucks = params.fleet;
  if (instance.trucks.max_conventional == 0) instance.trucks.max_conventional = n;
  if (instance.trucks.max_electric == 0) instance.trucks.max_electric = n;
  instance.costs = params.costs;
  instance.charging = params.charging;

  return instance;
}

}  // namespace evrp

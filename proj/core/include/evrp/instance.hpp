#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "evrp/types.hpp"

namespace evrp {

// Square travel-time matrix, integer minutes, row-major.
class TravelMatrix {
 public:
  TravelMatrix() = default;
  TravelMatrix(std::size_t size, std::vector<Minutes> row_major);
  static TravelMatrix zeros(std::size_t size);

  Minutes operator()(LocationId from, LocationId to) const {
    return data_[static_cast<std::size_t>(from) * size_ + static_cast<std::size_t>(to)];
  }
  Minutes& operator()(LocationId from, LocationId to) {
    return data_[static_cast<std::size_t>(from) * size_ + static_cast<std::size_t>(to)];
  }

  std::size_t size() const { return size_; }
  const std::vector<Minutes>& raw() const { return data_; }

  friend bool operator==(const TravelMatrix& lhs, const TravelMatrix& rhs) = default;

 private:
  std::size_t size_ = 0;
  std::vector<Minutes> data_;
};

struct FleetSpec {
  int max_conventional = 0;
  int max_electric = 0;
  std::int64_t capacity_conventional = 0;  // order units per shift
  std::int64_t capacity_electric = 0;
  Minutes range_conventional = 0;  // max travel time per shift
  Minutes range_electric = 0;

  friend bool operator==(const FleetSpec&, const FleetSpec&) = default;
};

struct CostParams {
  Cost tco_conventional = 0;
  Cost tco_electric = 0;
  Cost evse_cost = 0;
  ObjectiveMode objective_mode = ObjectiveMode::weighted_sum;

  friend bool operator==(const CostParams&, const CostParams&) = default;
};

struct ChargingParams {
  // Driving minutes replenished per recharging minute.
  double recharge_speed = 1.0;
  // Depot break between the day and night shifts; all recharging must fit
  // into break_window * evse_count.
  Minutes break_window = 1;

  friend bool operator==(const ChargingParams&, const ChargingParams&) = default;
};

// Single-depot problem data. Location ids index the travel matrices; the id
// space is exactly {depot} + customers_day_only + customers_ohd.
struct Instance {
  LocationId depot = 0;
  std::vector<LocationId> customers_day_only;  // sorted, no night delivery
  std::vector<LocationId> customers_ohd;       // sorted, night delivery allowed
  TravelMatrix travel_day;
  TravelMatrix travel_night;
  std::vector<std::int64_t> volume;   // order units per location, 0 at depot
  std::vector<Minutes> service_time;  // drop-off minutes per location
  FleetSpec trucks;
  CostParams costs;
  ChargingParams charging;

  std::size_t location_count() const { return travel_day.size(); }
  std::size_t customer_count() const {
    return customers_day_only.size() + customers_ohd.size();
  }

  bool is_ohd(LocationId id) const;
  bool is_customer(LocationId id) const;
  std::vector<LocationId> all_customers() const;  // sorted
  std::int64_t total_volume() const;

  std::int64_t capacity(Engine engine) const {
    return engine == Engine::conventional ? trucks.capacity_conventional
                                          : trucks.capacity_electric;
  }
  Minutes range(Engine engine) const {
    return engine == Engine::conventional ? trucks.range_conventional
                                          : trucks.range_electric;
  }
  Cost tco(Engine engine) const {
    return engine == Engine::conventional ? costs.tco_conventional : costs.tco_electric;
  }

  // Invariant diagnostics; empty when well-formed. Messages name the
  // offending field using the serialized field names.
  std::vector<std::string> structure_problems() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

}  // namespace evrp

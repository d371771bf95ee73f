#include "evrp/instance.hpp"

#include <algorithm>
#include <stdexcept>

namespace evrp {

TravelMatrix::TravelMatrix(std::size_t size, std::vector<Minutes> row_major)
    : size_(size), data_(std::move(row_major)) {
  if (data_.size() != size_ * size_) {
    throw std::invalid_argument("travel matrix data does not match its dimension");
  }
}

TravelMatrix TravelMatrix::zeros(std::size_t size) {
  return TravelMatrix(size, std::vector<Minutes>(size * size, 0));
}

bool Instance::is_ohd(LocationId id) const {
  return std::binary_search(customers_ohd.begin(), customers_ohd.end(), id);
}

bool Instance::is_customer(LocationId id) const {
  return std::binary_search(customers_day_only.begin(), customers_day_only.end(), id) ||
         is_ohd(id);
}

std::vector<LocationId> Instance::all_customers() const {
  std::vector<LocationId> out;
  out.reserve(customer_count());
  std::merge(customers_day_only.begin(), customers_day_only.end(), customers_ohd.begin(),
             customers_ohd.end(), std::back_inserter(out));
  return out;
}

std::int64_t Instance::total_volume() const {
  std::int64_t total = 0;
  for (LocationId c : customers_day_only) total += volume[static_cast<std::size_t>(c)];
  for (LocationId c : customers_ohd) total += volume[static_cast<std::size_t>(c)];
  return total;
}

namespace {

void check_sorted_unique(const std::vector<LocationId>& ids, const char* field,
                         std::vector<std::string>& problems) {
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (ids[i] <= ids[i - 1]) {
      problems.push_back(std::string(field) + "[" + std::to_string(i) +
                         "]: not strictly ascending");
      return;
    }
  }
}

void check_matrix(const TravelMatrix& matrix, std::size_t n, const char* field,
                  std::vector<std::string>& problems) {
  if (matrix.size() != n) {
    problems.push_back(std::string(field) + ": dimension " + std::to_string(matrix.size()) +
                       " does not match location count " + std::to_string(n));
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<LocationId>(i);
    if (matrix(id, id) != 0) {
      problems.push_back(std::string(field) + "[" + std::to_string(i) + "][" +
                         std::to_string(i) + "]: diagonal entry must be 0");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix(id, static_cast<LocationId>(j)) < 0) {
        problems.push_back(std::string(field) + "[" + std::to_string(i) + "][" +
                           std::to_string(j) + "]: negative travel time");
        return;  // one negative entry is enough to reject
      }
    }
  }
}

}  // namespace

std::vector<std::string> Instance::structure_problems() const {
  std::vector<std::string> problems;
  const std::size_t n = location_count();

  if (n == 0) {
    problems.emplace_back("travel_day: empty matrix");
    return problems;
  }
  if (depot < 0 || static_cast<std::size_t>(depot) >= n) {
    problems.push_back("depot: index " + std::to_string(depot) + " out of range");
    return problems;
  }

  check_sorted_unique(customers_day_only, "customers_day_only", problems);
  check_sorted_unique(customers_ohd, "customers_ohd", problems);

  std::vector<int> seen(n, 0);
  seen[static_cast<std::size_t>(depot)] += 1;
  auto mark = [&](const std::vector<LocationId>& ids, const char* field) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const LocationId id = ids[i];
      if (id < 0 || static_cast<std::size_t>(id) >= n) {
        problems.push_back(std::string(field) + "[" + std::to_string(i) + "]: index " +
                           std::to_string(id) + " out of range");
        continue;
      }
      if (id == depot) {
        problems.push_back(std::string(field) + "[" + std::to_string(i) +
                           "]: depot listed as customer");
      }
      seen[static_cast<std::size_t>(id)] += 1;
    }
  };
  mark(customers_day_only, "customers_day_only");
  mark(customers_ohd, "customers_ohd");
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] == 0) {
      problems.push_back("location " + std::to_string(i) +
                         ": covered by neither depot nor customer sets");
    } else if (seen[i] > 1 && static_cast<LocationId>(i) != depot) {
      problems.push_back("location " + std::to_string(i) +
                         ": listed in both customers_day_only and customers_ohd");
    }
  }

  check_matrix(travel_day, n, "travel_day", problems);
  check_matrix(travel_night, n, "travel_night", problems);

  if (volume.size() != n) {
    problems.push_back("volume: length " + std::to_string(volume.size()) +
                       " does not match location count");
  }
  if (service_time.size() != n) {
    problems.push_back("service_time: length " + std::to_string(service_time.size()) +
                       " does not match location count");
  }
  if (volume.size() == n && service_time.size() == n) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool customer = is_customer(static_cast<LocationId>(i));
      if (customer && volume[i] <= 0) {
        problems.push_back("volume[" + std::to_string(i) + "]: customer demand must be > 0");
      }
      if (!customer && volume[i] != 0) {
        problems.push_back("volume[" + std::to_string(i) + "]: depot demand must be 0");
      }
      if (service_time[i] < 0) {
        problems.push_back("service_time[" + std::to_string(i) + "]: negative");
      }
    }
  }

  if (trucks.max_conventional < 0) problems.emplace_back("trucks.max_conventional: negative");
  if (trucks.max_electric < 0) problems.emplace_back("trucks.max_electric: negative");
  if (trucks.max_conventional + trucks.max_electric == 0) {
    problems.emplace_back("trucks: fleet bounds admit no truck at all");
  }
  if (trucks.capacity_conventional <= 0) {
    problems.emplace_back("trucks.capacity_conventional: must be > 0");
  }
  if (trucks.capacity_electric <= 0) {
    problems.emplace_back("trucks.capacity_electric: must be > 0");
  }
  if (trucks.range_conventional <= 0) {
    problems.emplace_back("trucks.range_conventional: must be > 0");
  }
  if (trucks.range_electric <= 0) problems.emplace_back("trucks.range_electric: must be > 0");

  if (costs.tco_conventional < 0) problems.emplace_back("costs.tco_conventional: negative");
  if (costs.tco_electric < 0) problems.emplace_back("costs.tco_electric: negative");
  if (costs.evse_cost < 0) problems.emplace_back("costs.evse_cost: negative");

  if (!(charging.recharge_speed > 0)) {
    problems.emplace_back("charging.recharge_speed: must be > 0");
  }
  if (charging.break_window <= 0) {
    problems.emplace_back("charging.break_window: must be > 0");
  }

  return problems;
}

}  // namespace evrp

#include "evrp/sweep.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <type_traits>

#include "json.hpp"

#include "evrp/errors.hpp"
#include "evrp/model.hpp"
#include "evrp/threading.hpp"
#include "evrp/vns.hpp"

namespace evrp {

namespace {

constexpr double kNominalMph = 30.0;

struct Cell {
  Minutes ev_range;
  double ohd_ratio;
  std::uint64_t seed;
};

SweepRow solve_cell(const SweepSpec& spec, const Cell& cell) {
  SweepRow row;
  row.ev_range = cell.ev_range;
  row.ohd_ratio = cell.ohd_ratio;
  row.seed = cell.seed;

  GenParams params = spec.base;
  params.ohd_ratio = cell.ohd_ratio;
  params.seed = cell.seed;
  params.fleet.range_electric = cell.ev_range;
  const Instance instance = generate(params);

  VnsConfig config;
  config.max_computation_time = spec.budget_per_run;
  config.seed = cell.seed;
  config.threads = 1;  // cells already run in parallel
  config.include_service_in_range = spec.range_includes_service;

  const auto start = std::chrono::steady_clock::now();
  const VnsResult result = vns_solve(instance, config);
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  int trucks = 0;
  int routes = 0;
  for (const TruckPlan& truck : result.solution.trucks) {
    if (!truck.assigned()) continue;
    ++trucks;
    if (!truck.day_route.empty()) ++routes;
    if (!truck.night_route.empty()) ++routes;
  }
  Minutes dropoff = 0;
  for (const TruckPlan& truck : result.solution.trucks) {
    dropoff += route_service_time(instance, truck.day_route);
    dropoff += route_service_time(instance, truck.night_route);
  }

  const Minutes travel = objective_travel(instance, result.solution);
  row.trucks = trucks;
  row.routes = routes;
  row.ev_ratio_pct = trucks == 0 ? 0.0 : 100.0 * (routes - trucks) / trucks;
  row.vht_hours = static_cast<double>(travel) / 60.0;
  row.vmt_miles = row.vht_hours * kNominalMph;
  row.avg_mph = kNominalMph;
  row.avg_vmt_per_route = routes == 0 ? 0.0 : row.vmt_miles / routes;
  row.avg_vht_per_route = routes == 0 ? 0.0 : row.vht_hours / routes;
  row.avg_operation_hours =
      trucks == 0 ? 0.0 : static_cast<double>(travel + dropoff) / 60.0 / trucks;
  row.purchase = static_cast<double>(result.score.purchase);
  row.travel_minutes = static_cast<double>(travel);
  row.objective = static_cast<double>(result.score.scalar());
  row.feasible = result.feasible;
  return row;
}

SweepRow mean_of(std::span<const SweepRow> rows) {
  SweepRow mean;
  mean.mean_row = true;
  mean.ev_range = rows.front().ev_range;
  mean.ohd_ratio = rows.front().ohd_ratio;
  mean.feasible = true;
  const auto n = static_cast<double>(rows.size());
  for (const SweepRow& row : rows) {
    mean.trucks += row.trucks / n;
    mean.routes += row.routes / n;
    mean.ev_ratio_pct += row.ev_ratio_pct / n;
    mean.vht_hours += row.vht_hours / n;
    mean.vmt_miles += row.vmt_miles / n;
    mean.avg_mph += row.avg_mph / n;
    mean.avg_vmt_per_route += row.avg_vmt_per_route / n;
    mean.avg_vht_per_route += row.avg_vht_per_route / n;
    mean.avg_operation_hours += row.avg_operation_hours / n;
    mean.purchase += row.purchase / n;
    mean.travel_minutes += row.travel_minutes / n;
    mean.objective += row.objective / n;
    mean.wall_seconds += row.wall_seconds / n;
    mean.feasible = mean.feasible && row.feasible;
  }
  return mean;
}

}  // namespace

SweepSpec read_sweep_spec(std::istream& source) {
  using json = nlohmann::ordered_json;
  json j;
  try {
    j = json::parse(source);
  } catch (const json::exception& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }

  if (j.contains("schema_version") && j["schema_version"] != kSweepSchema) {
    throw ParseError("schema_version", "unsupported version");
  }

  SweepSpec spec;
  auto fetch = [&](const json& obj, const char* key, auto& target, const std::string& path) {
    if (!obj.contains(key)) return;
    try {
      target = obj[key].template get<std::decay_t<decltype(target)>>();
    } catch (const json::exception&) {
      throw ParseError(path, "unexpected type");
    }
  };

  if (j.contains("base")) {
    const json& base = j["base"];
    fetch(base, "customer_count", spec.base.customer_count, "base.customer_count");
    fetch(base, "ohd_ratio", spec.base.ohd_ratio, "base.ohd_ratio");
    fetch(base, "seed", spec.base.seed, "base.seed");
    fetch(base, "plane_extent", spec.base.plane_extent, "base.plane_extent");
    fetch(base, "speed_ratio_night", spec.base.speed_ratio_night, "base.speed_ratio_night");
    fetch(base, "volume_min", spec.base.volume_min, "base.volume_min");
    fetch(base, "volume_max", spec.base.volume_max, "base.volume_max");
    fetch(base, "unit_dropoff", spec.base.unit_dropoff, "base.unit_dropoff");
    if (base.contains("fleet")) {
      const json& fleet = base["fleet"];
      fetch(fleet, "max_conventional", spec.base.fleet.max_conventional,
            "base.fleet.max_conventional");
      fetch(fleet, "max_electric", spec.base.fleet.max_electric, "base.fleet.max_electric");
      fetch(fleet, "capacity_conventional", spec.base.fleet.capacity_conventional,
            "base.fleet.capacity_conventional");
      fetch(fleet, "capacity_electric", spec.base.fleet.capacity_electric,
            "base.fleet.capacity_electric");
      fetch(fleet, "range_conventional", spec.base.fleet.range_conventional,
            "base.fleet.range_conventional");
      fetch(fleet, "range_electric", spec.base.fleet.range_electric,
            "base.fleet.range_electric");
    }
    if (base.contains("costs")) {
      const json& costs = base["costs"];
      fetch(costs, "tco_conventional", spec.base.costs.tco_conventional,
            "base.costs.tco_conventional");
      fetch(costs, "tco_electric", spec.base.costs.tco_electric, "base.costs.tco_electric");
      fetch(costs, "evse_cost", spec.base.costs.evse_cost, "base.costs.evse_cost");
      if (costs.contains("objective_mode")) {
        const auto text = costs["objective_mode"].get<std::string>();
        if (text == "weighted_sum") {
          spec.base.costs.objective_mode = ObjectiveMode::weighted_sum;
        } else if (text == "lexicographic") {
          spec.base.costs.objective_mode = ObjectiveMode::lexicographic;
        } else {
          throw ParseError("base.costs.objective_mode", "unknown objective mode");
        }
      }
    }
    if (base.contains("charging")) {
      const json& charging = base["charging"];
      fetch(charging, "recharge_speed", spec.base.charging.recharge_speed,
            "base.charging.recharge_speed");
      fetch(charging, "break_window", spec.base.charging.break_window,
            "base.charging.break_window");
    }
  }

  fetch(j, "ohd_ratios", spec.ohd_ratios, "ohd_ratios");
  fetch(j, "ev_ranges", spec.ev_ranges, "ev_ranges");
  fetch(j, "seeds", spec.seeds, "seeds");
  if (j.contains("budget_s")) {
    double seconds = 0;
    fetch(j, "budget_s", seconds, "budget_s");
    spec.budget_per_run = std::chrono::milliseconds(static_cast<std::int64_t>(seconds * 1000));
  }
  fetch(j, "range_includes_service", spec.range_includes_service, "range_includes_service");

  if (spec.ohd_ratios.empty()) throw ParseError("ohd_ratios", "must be nonempty");
  if (spec.ev_ranges.empty()) throw ParseError("ev_ranges", "must be nonempty");
  if (spec.seeds.empty()) throw ParseError("seeds", "must be nonempty");
  for (double r : spec.ohd_ratios) {
    if (r < 0.0 || r > 1.0) throw ParseError("ohd_ratios", "ratios must lie in [0, 1]");
  }
  return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::ostream* log) {
  std::vector<Cell> cells;
  for (Minutes range : spec.ev_ranges) {
    for (double ratio : spec.ohd_ratios) {
      for (std::uint64_t seed : spec.seeds) {
        cells.push_back({range, ratio, seed});
      }
    }
  }

  std::vector<SweepRow> data(cells.size());
  parallel_for(cells.size(), spec.threads,
               [&](std::size_t i) { data[i] = solve_cell(spec, cells[i]); });

  if (log) {
    for (const SweepRow& row : data) {
      *log << "cell range=" << row.ev_range << " ohd=" << row.ohd_ratio
           << " seed=" << row.seed << " objective=" << row.objective
           << " feasible=" << (row.feasible ? 1 : 0) << " wall_s=" << row.wall_seconds
           << '\n';
    }
  }

  // Data rows plus a mean row per (range, ratio), in grid order.
  std::vector<SweepRow> rows;
  std::size_t cursor = 0;
  for (std::size_t r = 0; r < spec.ev_ranges.size(); ++r) {
    for (std::size_t o = 0; o < spec.ohd_ratios.size(); ++o) {
      const std::size_t begin = cursor;
      for (std::size_t s = 0; s < spec.seeds.size(); ++s, ++cursor) {
        rows.push_back(data[cursor]);
      }
      rows.push_back(mean_of(std::span<const SweepRow>(data).subspan(
          begin, spec.seeds.size())));
    }
  }
  return rows;
}

void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& sink) {
  sink << "# EVRP-OHD scenario sweep\n"
          "# vmt_miles = vht_hours * 30 mph by convention, not measured mileage.\n"
          "# avg_operation_hours averages travel plus drop-off time per truck.\n"
          "# Synthetic desk-scale instances reproduce structure and trends, not\n"
          "# absolute metropolitan magnitudes.\n"
          "row,ev_range_min,ohd_ratio,seed,trucks,routes,ev_ratio_pct,vht_hours,"
          "vmt_miles,avg_mph,avg_vmt_per_route,avg_vht_per_route,avg_operation_hours,"
          "purchase,travel_min,objective,feasible\n";
  char line[512];
  for (const SweepRow& row : rows) {
    if (row.mean_row) {
      std::snprintf(line, sizeof line, "mean,%lld,%.2f,", static_cast<long long>(row.ev_range),
                    row.ohd_ratio);
    } else {
      std::snprintf(line, sizeof line, "run,%lld,%.2f,%llu",
                    static_cast<long long>(row.ev_range), row.ohd_ratio,
                    static_cast<unsigned long long>(row.seed));
    }
    sink << line;
    std::snprintf(line, sizeof line,
                  ",%.1f,%.1f,%.1f,%.2f,%.1f,%.1f,%.1f,%.2f,%.2f,%.1f,%.1f,%.1f,%d\n",
                  row.trucks, row.routes, row.ev_ratio_pct, row.vht_hours, row.vmt_miles,
                  row.avg_mph, row.avg_vmt_per_route, row.avg_vht_per_route,
                  row.avg_operation_hours, row.purchase, row.travel_minutes, row.objective,
                  row.feasible ? 1 : 0);
    sink << line;
  }
}

}  // namespace evrp

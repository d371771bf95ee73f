#pragma once

#include <chrono>
#include <iosfwd>
#include <span>
#include <vector>

#include "evrp/generate.hpp"
#include "evrp/types.hpp"

namespace evrp {

inline constexpr const char* kSweepSchema = "evrp-sweep/1";

// Scenario grid: OHD acceptance ratios x electric driving ranges x seeds.
// The default objective is lexicographic: fleet and EVSE cost first, travel
// second, matching how the scenario studies rank fleets.
struct SweepSpec {
  GenParams base{.costs = CostParams{1000, 950, 200, ObjectiveMode::lexicographic}};
  std::vector<double> ohd_ratios{0.0, 0.1, 0.2, 0.3, 0.5};
  std::vector<Minutes> ev_ranges{420, 660};
  std::vector<std::uint64_t> seeds{1};
  std::chrono::milliseconds budget_per_run{60'000};
  int threads = 1;
  // Shift-duration accounting: a shift's range budget covers travel plus
  // drop-off time, so a truck's whole working day must fit its two budgets.
  bool range_includes_service = true;
};

// Reads a sweep specification file; every field is optional and falls back
// to the defaults above. Throws ParseError on malformed input.
SweepSpec read_sweep_spec(std::istream& source);

struct SweepRow {
  bool mean_row = false;
  Minutes ev_range = 0;
  double ohd_ratio = 0.0;
  std::uint64_t seed = 0;  // unused for mean rows
  double trucks = 0.0;     // A
  double routes = 0.0;     // B: day routes + night routes
  double ev_ratio_pct = 0.0;  // 100 * (B - A) / A
  double vht_hours = 0.0;
  double vmt_miles = 0.0;  // vht_hours * 30 mph, by convention
  double avg_mph = 0.0;
  double avg_vmt_per_route = 0.0;
  double avg_vht_per_route = 0.0;
  double avg_operation_hours = 0.0;  // (travel + drop-off) / trucks
  double purchase = 0.0;
  double travel_minutes = 0.0;
  double objective = 0.0;  // purchase + travel
  bool feasible = false;
  double wall_seconds = 0.0;  // reported to the log stream, never to the CSV
};

// Runs the full grid (cells may run concurrently) and returns data rows in
// deterministic (range, ratio, seed) order with one mean row appended per
// (range, ratio). Failed cells become infeasible rows rather than aborting.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, std::ostream* log = nullptr);

// Fixed, documented CSV layout; excludes wall time so identical inputs give
// byte-identical files.
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& sink);

}  // namespace evrp

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evrp/errors.hpp"
#include "evrp/exact.hpp"
#include "evrp/generate.hpp"
#include "evrp/io.hpp"
#include "evrp/model.hpp"
#include "evrp/sweep.hpp"
#include "evrp/threading.hpp"
#include "evrp/vns.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // bad flags, bad files, solver limits
constexpr int kExitInfeasible = 2;  // violations present or proven infeasible
constexpr int kExitInternal = 3;

struct GenOptions {
  evrp::GenParams params;
  std::string out;
};

int run_gen(const GenOptions& options) {
  const evrp::Instance instance = evrp::generate(options.params);
  evrp::write_instance_file(instance, options.out);
  std::cout << "n=" << instance.customer_count()
            << " ohd_customers=" << instance.customers_ohd.size()
            << " total_volume=" << instance.total_volume() << " file=" << options.out << '\n';
  return kExitOk;
}

struct SolveOptions {
  std::string in;
  std::string method = "vns";
  double budget_seconds = 10.0;
  std::uint64_t seed = 1;
  std::string objective;  // empty = keep the instance's mode
  std::string out;
  int threads = 0;
  int cap = 200;
  int stall_cycles = 50;
  int shake_intensity = 4;
  int exact_max_customers = 8;
  int exact_max_trucks = 4;
  bool range_includes_service = false;
};

void print_solve_summary(const evrp::Instance& instance, const evrp::Solution& solution,
                         const std::string& method, bool feasible, double wall_seconds) {
  const evrp::Score score = evrp::scalar_objective(instance, solution, instance.costs);
  int routes = 0;
  for (const evrp::TruckPlan& truck : solution.trucks) {
    if (!truck.day_route.empty()) ++routes;
    if (!truck.night_route.empty()) ++routes;
  }
  std::ostringstream line;
  line << "method=" << method << " mode=" << to_string(instance.costs.objective_mode)
       << " purchase=" << score.purchase << " travel=" << score.travel
       << " objective=" << score.scalar()
       << " trucks=" << (solution.assigned_count(evrp::Engine::conventional) +
                         solution.assigned_count(evrp::Engine::electric))
       << " conventional=" << solution.assigned_count(evrp::Engine::conventional)
       << " electric=" << solution.assigned_count(evrp::Engine::electric)
       << " evse=" << solution.evse_count << " routes=" << routes
       << " feasible=" << (feasible ? 1 : 0) << " wall_s=" << wall_seconds;
  std::cout << line.str() << '\n';
}

int run_solve(const SolveOptions& options) {
  evrp::Instance instance = evrp::read_instance_file(options.in);
  if (options.objective == "weighted") {
    instance.costs.objective_mode = evrp::ObjectiveMode::weighted_sum;
  } else if (options.objective == "lex") {
    instance.costs.objective_mode = evrp::ObjectiveMode::lexicographic;
  }

  const auto budget = std::chrono::milliseconds(
      static_cast<std::int64_t>(options.budget_seconds * 1000.0));
  const auto start = std::chrono::steady_clock::now();

  evrp::Solution solution;
  bool feasible = false;
  if (options.method == "exact") {
    evrp::ExactLimits limits;
    limits.max_customers = options.exact_max_customers;
    limits.max_trucks = options.exact_max_trucks;
    limits.time_budget = budget;
    try {
      evrp::ExactResult result = evrp::solve_exact(instance, limits);
      solution = std::move(result.solution);
      feasible = true;
    } catch (const evrp::InfeasibleError& e) {
      std::cerr << "infeasible: " << e.what() << '\n';
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      print_solve_summary(instance, evrp::Solution{}, options.method, false, wall);
      return kExitInfeasible;
    }
  } else {
    evrp::VnsConfig config;
    config.max_computation_time = budget;
    config.seed = options.seed;
    config.threads = evrp::resolve_thread_count(options.threads);
    config.neighborhood_cap = options.cap;
    config.stall_cycles = options.stall_cycles;
    config.shake_intensity = options.shake_intensity;
    config.include_service_in_range = options.range_includes_service;
    evrp::VnsResult result = evrp::vns_solve(instance, config);
    solution = std::move(result.solution);
    feasible = result.feasible;
    if (!feasible) {
      for (const evrp::Violation& violation : result.violations) {
        std::cerr << "violation: " << to_string(violation) << '\n';
      }
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!options.out.empty()) {
    evrp::write_solution_file(instance, solution, options.out);
  }
  print_solve_summary(instance, solution, options.method, feasible, wall);
  return feasible ? kExitOk : kExitInfeasible;
}

struct ValidateOptions {
  std::string instance_path;
  std::string solution_path;
  bool range_includes_service = false;
};

int run_validate(const ValidateOptions& options) {
  const evrp::Instance instance = evrp::read_instance_file(options.instance_path);
  const evrp::LoadedSolution loaded = evrp::read_solution_file(options.solution_path);

  if (!evrp::stored_objective_matches(instance, loaded)) {
    std::cerr << "warning: stored objective differs from the recomputed objective\n";
  }

  const std::vector<evrp::Violation> violations =
      evrp::validate(instance, loaded.solution, options.range_includes_service);
  for (const evrp::Violation& violation : violations) {
    std::cout << to_string(violation) << '\n';
  }
  std::cout << "violations=" << violations.size() << '\n';
  return violations.empty() ? kExitOk : kExitInfeasible;
}

struct SweepOptions {
  std::string spec_path;
  std::string out;
  int threads = 0;
  // Inline settings used when no spec file is given.
  int n = 100;
  std::vector<double> ratios;
  std::vector<evrp::Minutes> ranges;
  int seed_count = 1;
  std::uint64_t base_seed = 1;
  double budget_seconds = 60.0;
  bool range_travel_only = false;
};

int run_sweep_cmd(const SweepOptions& options) {
  evrp::SweepSpec spec;
  if (!options.spec_path.empty()) {
    std::ifstream in(options.spec_path);
    if (!in) throw evrp::Error("cannot open '" + options.spec_path + "' for reading");
    spec = evrp::read_sweep_spec(in);
  } else {
    spec.base.customer_count = options.n;
    if (!options.ratios.empty()) spec.ohd_ratios = options.ratios;
    if (!options.ranges.empty()) spec.ev_ranges = options.ranges;
    spec.seeds.clear();
    for (int s = 0; s < options.seed_count; ++s) {
      spec.seeds.push_back(options.base_seed + static_cast<std::uint64_t>(s));
    }
    spec.budget_per_run = std::chrono::milliseconds(
        static_cast<std::int64_t>(options.budget_seconds * 1000.0));
    spec.range_includes_service = !options.range_travel_only;
    for (double r : spec.ohd_ratios) {
      if (r < 0.0 || r > 1.0) {
        throw evrp::ParseError("ohd_ratios", "ratios must lie in [0, 1]");
      }
    }
  }
  spec.threads = evrp::resolve_thread_count(options.threads);

  const std::vector<evrp::SweepRow> rows = evrp::run_sweep(spec, &std::cerr);

  std::ofstream out(options.out);
  if (!out) throw evrp::Error("cannot open '" + options.out + "' for writing");
  evrp::write_sweep_csv(rows, out);

  bool all_feasible = true;
  for (const evrp::SweepRow& row : rows) all_feasible = all_feasible && row.feasible;
  std::cout << "rows=" << rows.size() << " file=" << options.out
            << " all_feasible=" << (all_feasible ? 1 : 0) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EVRP-OHD toolkit: fleet-mix electric vehicle routing with off-hour delivery"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "Generate a synthetic instance");
  cmd_gen->add_option("--n", gen.params.customer_count, "Customer count")
      ->check(CLI::PositiveNumber);
  cmd_gen->add_option("--ohd", gen.params.ohd_ratio, "OHD acceptance ratio")
      ->check(CLI::Range(0.0, 1.0));
  cmd_gen->add_option("--seed", gen.params.seed, "Generator seed");
  cmd_gen->add_option("--out", gen.out, "Output instance file")->required();
  cmd_gen->add_option("--extent", gen.params.plane_extent, "Square side, minutes of travel");
  cmd_gen->add_option("--night-speed", gen.params.speed_ratio_night, "Night speed ratio");
  cmd_gen->add_option("--vol-min", gen.params.volume_min, "Minimum order volume");
  cmd_gen->add_option("--vol-max", gen.params.volume_max, "Maximum order volume");
  cmd_gen->add_option("--unit-dropoff", gen.params.unit_dropoff,
                      "Drop-off minutes per order unit");
  cmd_gen->add_option("--max-conv", gen.params.fleet.max_conventional,
                      "Conventional fleet bound (0 = customer count)");
  cmd_gen->add_option("--max-elec", gen.params.fleet.max_electric,
                      "Electric fleet bound (0 = customer count)");
  cmd_gen->add_option("--qc", gen.params.fleet.capacity_conventional, "Conventional capacity");
  cmd_gen->add_option("--qe", gen.params.fleet.capacity_electric, "Electric capacity");
  cmd_gen->add_option("--dc", gen.params.fleet.range_conventional,
                      "Conventional range, minutes");
  cmd_gen->add_option("--de", gen.params.fleet.range_electric, "Electric range, minutes");
  cmd_gen->add_option("--tco-c", gen.params.costs.tco_conventional, "Conventional truck TCO");
  cmd_gen->add_option("--tco-e", gen.params.costs.tco_electric, "Electric truck TCO");
  cmd_gen->add_option("--evse-cost", gen.params.costs.evse_cost, "EVSE purchase cost");
  cmd_gen->add_option("--recharge-speed", gen.params.charging.recharge_speed,
                      "Driving minutes replenished per recharging minute");
  cmd_gen->add_option("--break-window", gen.params.charging.break_window,
                      "Break window, minutes");
  std::string gen_objective;
  cmd_gen->add_option("--objective", gen_objective, "Objective mode")
      ->check(CLI::IsMember({"weighted", "lex"}));

  SolveOptions solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "Solve an instance");
  cmd_solve->add_option("--in", solve.in, "Instance file")->required();
  cmd_solve->add_option("--method", solve.method, "Solver")
      ->check(CLI::IsMember({"vns", "exact"}));
  cmd_solve->add_option("--budget", solve.budget_seconds, "Time budget, seconds");
  cmd_solve->add_option("--seed", solve.seed, "Search seed");
  cmd_solve->add_option("--objective", solve.objective, "Override objective mode")
      ->check(CLI::IsMember({"weighted", "lex"}));
  cmd_solve->add_option("--out", solve.out, "Output solution file");
  cmd_solve->add_option("--threads", solve.threads, "Worker threads (0 = EVRP_THREADS/auto)");
  cmd_solve->add_option("--cap", solve.cap, "Neighborhood candidate cap");
  cmd_solve->add_option("--stall", solve.stall_cycles, "Stall cycles before stopping");
  cmd_solve->add_option("--shake-intensity", solve.shake_intensity,
                        "Prioritized source trucks per shake");
  cmd_solve->add_option("--max-customers", solve.exact_max_customers,
                        "Exact solver customer limit");
  cmd_solve->add_option("--max-trucks", solve.exact_max_trucks, "Exact solver truck limit");
  cmd_solve->add_flag("--range-includes-service", solve.range_includes_service,
                      "Count drop-off time against the per-shift range budget");

  ValidateOptions validate;
  CLI::App* cmd_validate = app.add_subcommand("validate", "Check a solution file");
  cmd_validate->add_option("--instance", validate.instance_path, "Instance file")->required();
  cmd_validate->add_option("--solution", validate.solution_path, "Solution file")->required();
  cmd_validate->add_flag("--range-includes-service", validate.range_includes_service,
                         "Count drop-off time against the driving range");

  SweepOptions sweep;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "Run a scenario grid and write a CSV");
  cmd_sweep->add_option("--spec", sweep.spec_path, "Sweep specification file");
  cmd_sweep->add_option("--out", sweep.out, "Output CSV file")->required();
  cmd_sweep->add_option("--threads", sweep.threads, "Worker threads (0 = EVRP_THREADS/auto)");
  cmd_sweep->add_option("--n", sweep.n, "Customer count")->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--ohd-ratios", sweep.ratios, "OHD ratios")->delimiter(',');
  cmd_sweep->add_option("--ranges", sweep.ranges, "Electric ranges, minutes")->delimiter(',');
  cmd_sweep->add_option("--seeds", sweep.seed_count, "Seeds per cell")
      ->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--seed", sweep.base_seed, "First seed");
  cmd_sweep->add_option("--budget", sweep.budget_seconds, "Budget per cell, seconds");
  cmd_sweep->add_flag("--range-travel-only", sweep.range_travel_only,
                      "Count only travel time against the range (default counts drop-offs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_gen->parsed()) {
      if (gen_objective == "lex") {
        gen.params.costs.objective_mode = evrp::ObjectiveMode::lexicographic;
      } else if (gen_objective == "weighted") {
        gen.params.costs.objective_mode = evrp::ObjectiveMode::weighted_sum;
      }
      return run_gen(gen);
    }
    if (cmd_solve->parsed()) return run_solve(solve);
    if (cmd_validate->parsed()) return run_validate(validate);
    if (cmd_sweep->parsed()) return run_sweep_cmd(sweep);
  } catch (const evrp::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const evrp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const evrp::StructuralError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const evrp::LimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

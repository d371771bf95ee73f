#include "evrp/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "evrp/errors.hpp"
#include "evrp/model.hpp"

namespace evrp {

namespace {

using json = nlohmann::ordered_json;

json instance_to_json(const Instance& instance) {
  json j;
  j["schema_version"] = kInstanceSchema;
  j["depot"] = instance.depot;
  j["customers_day_only"] = instance.customers_day_only;
  j["customers_ohd"] = instance.customers_ohd;
  j["travel_day"] = instance.travel_day.raw();
  j["travel_night"] = instance.travel_night.raw();
  j["volume"] = instance.volume;
  j["service_time"] = instance.service_time;
  j["trucks"] = {
      {"max_conventional", instance.trucks.max_conventional},
      {"max_electric", instance.trucks.max_electric},
      {"capacity_conventional", instance.trucks.capacity_conventional},
      {"capacity_electric", instance.trucks.capacity_electric},
      {"range_conventional", instance.trucks.range_conventional},
      {"range_electric", instance.trucks.range_electric},
  };
  j["costs"] = {
      {"tco_conventional", instance.costs.tco_conventional},
      {"tco_electric", instance.costs.tco_electric},
      {"evse_cost", instance.costs.evse_cost},
      {"objective_mode", to_string(instance.costs.objective_mode)},
  };
  j["charging"] = {
      {"recharge_speed", instance.charging.recharge_speed},
      {"break_window", instance.charging.break_window},
  };
  return j;
}

const json& require(const json& parent, const char* key, const std::string& path) {
  const auto it = parent.find(key);
  if (it == parent.end()) {
    throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  }
  return *it;
}

template <typename T>
T expect(const json& value, const std::string& path) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ParseError(path, "unexpected type");
  }
}

ObjectiveMode mode_from_string(const std::string& text, const std::string& path) {
  if (text == "weighted_sum") return ObjectiveMode::weighted_sum;
  if (text == "lexicographic") return ObjectiveMode::lexicographic;
  throw ParseError(path, "unknown objective mode '" + text + "'");
}

Engine engine_from_string(const std::string& text, const std::string& path) {
  if (text == "conventional") return Engine::conventional;
  if (text == "electric") return Engine::electric;
  throw ParseError(path, "unknown engine '" + text + "'");
}

TravelMatrix matrix_from_json(const json& value, std::size_t locations,
                              const std::string& path) {
  auto data = expect<std::vector<Minutes>>(value, path);
  if (data.size() != locations * locations) {
    throw ParseError(path, "expected " + std::to_string(locations * locations) +
                               " entries, found " + std::to_string(data.size()));
  }
  return TravelMatrix(locations, std::move(data));
}

// The location count comes from the day matrix; set sizes are validated
// afterwards so membership mistakes surface with located diagnostics.
std::size_t locations_from_matrix(const json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path, "expected an array");
  const std::size_t entries = value.size();
  std::size_t n = 0;
  while (n * n < entries) ++n;
  if (n * n != entries) {
    throw ParseError(path, "length " + std::to_string(entries) + " is not a perfect square");
  }
  return n;
}

Instance instance_from_json(const json& j) {
  const auto version = expect<std::string>(require(j, "schema_version", ""), "schema_version");
  if (version != kInstanceSchema) {
    throw ParseError("schema_version", "unsupported version '" + version + "'");
  }

  Instance instance;
  instance.depot = expect<LocationId>(require(j, "depot", ""), "depot");
  instance.customers_day_only = expect<std::vector<LocationId>>(
      require(j, "customers_day_only", ""), "customers_day_only");
  instance.customers_ohd =
      expect<std::vector<LocationId>>(require(j, "customers_ohd", ""), "customers_ohd");

  const std::size_t locations = locations_from_matrix(require(j, "travel_day", ""), "travel_day");
  instance.travel_day = matrix_from_json(require(j, "travel_day", ""), locations, "travel_day");
  instance.travel_night =
      matrix_from_json(require(j, "travel_night", ""), locations, "travel_night");
  instance.volume = expect<std::vector<std::int64_t>>(require(j, "volume", ""), "volume");
  instance.service_time =
      expect<std::vector<Minutes>>(require(j, "service_time", ""), "service_time");

  const json& trucks = require(j, "trucks", "");
  instance.trucks.max_conventional =
      expect<int>(require(trucks, "max_conventional", "trucks"), "trucks.max_conventional");
  instance.trucks.max_electric =
      expect<int>(require(trucks, "max_electric", "trucks"), "trucks.max_electric");
  instance.trucks.capacity_conventional = expect<std::int64_t>(
      require(trucks, "capacity_conventional", "trucks"), "trucks.capacity_conventional");
  instance.trucks.capacity_electric = expect<std::int64_t>(
      require(trucks, "capacity_electric", "trucks"), "trucks.capacity_electric");
  instance.trucks.range_conventional = expect<Minutes>(
      require(trucks, "range_conventional", "trucks"), "trucks.range_conventional");
  instance.trucks.range_electric =
      expect<Minutes>(require(trucks, "range_electric", "trucks"), "trucks.range_electric");

  const json& costs = require(j, "costs", "");
  instance.costs.tco_conventional =
      expect<Cost>(require(costs, "tco_conventional", "costs"), "costs.tco_conventional");
  instance.costs.tco_electric =
      expect<Cost>(require(costs, "tco_electric", "costs"), "costs.tco_electric");
  instance.costs.evse_cost =
      expect<Cost>(require(costs, "evse_cost", "costs"), "costs.evse_cost");
  instance.costs.objective_mode = mode_from_string(
      expect<std::string>(require(costs, "objective_mode", "costs"), "costs.objective_mode"),
      "costs.objective_mode");

  const json& charging = require(j, "charging", "");
  instance.charging.recharge_speed = expect<double>(
      require(charging, "recharge_speed", "charging"), "charging.recharge_speed");
  instance.charging.break_window =
      expect<Minutes>(require(charging, "break_window", "charging"), "charging.break_window");

  const auto problems = instance.structure_problems();
  if (!problems.empty()) {
    throw ParseError(problems.front(), "instance invariant violated");
  }
  return instance;
}

json solution_to_json(const Instance& instance, const Solution& solution) {
  json j;
  j["schema_version"] = kSolutionSchema;
  json trucks = json::array();
  for (const TruckPlan& truck : solution.trucks) {
    trucks.push_back({
        {"engine", to_string(truck.engine)},
        {"day_route", truck.day_route},
        {"night_route", truck.night_route},
        {"recharge_time", truck.recharge_time},
    });
  }
  j["trucks"] = std::move(trucks);
  j["evse_count"] = solution.evse_count;
  j["objective"] = {
      {"mode", to_string(instance.costs.objective_mode)},
      {"purchase", objective_purchase(solution, instance.costs)},
      {"travel", objective_travel(instance, solution)},
  };
  return j;
}

LoadedSolution solution_from_json(const json& j) {
  const auto version = expect<std::string>(require(j, "schema_version", ""), "schema_version");
  if (version != kSolutionSchema) {
    throw ParseError("schema_version", "unsupported version '" + version + "'");
  }

  LoadedSolution loaded;
  const json& trucks = require(j, "trucks", "");
  if (!trucks.is_array()) throw ParseError("trucks", "expected an array");
  for (std::size_t i = 0; i < trucks.size(); ++i) {
    const std::string path = "trucks[" + std::to_string(i) + "]";
    const json& t = trucks[i];
    TruckPlan plan;
    plan.engine = engine_from_string(
        expect<std::string>(require(t, "engine", path), path + ".engine"), path + ".engine");
    plan.day_route =
        expect<std::vector<LocationId>>(require(t, "day_route", path), path + ".day_route");
    plan.night_route =
        expect<std::vector<LocationId>>(require(t, "night_route", path), path + ".night_route");
    plan.recharge_time =
        expect<Minutes>(require(t, "recharge_time", path), path + ".recharge_time");
    if (plan.recharge_time < 0) {
      throw ParseError(path + ".recharge_time", "negative recharge time");
    }
    loaded.solution.trucks.push_back(std::move(plan));
  }
  loaded.solution.evse_count = expect<int>(require(j, "evse_count", ""), "evse_count");
  if (loaded.solution.evse_count < 0) {
    throw ParseError("evse_count", "negative EVSE count");
  }

  if (j.contains("objective")) {
    const json& objective = j["objective"];
    StoredObjective stored;
    stored.mode = mode_from_string(
        expect<std::string>(require(objective, "mode", "objective"), "objective.mode"),
        "objective.mode");
    stored.purchase =
        expect<Cost>(require(objective, "purchase", "objective"), "objective.purchase");
    stored.travel =
        expect<Minutes>(require(objective, "travel", "objective"), "objective.travel");
    loaded.objective = stored;
  }
  return loaded;
}

json parse_stream(std::istream& source) {
  try {
    return json::parse(source);
  } catch (const json::exception& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

void write_instance(const Instance& instance, std::ostream& sink) {
  sink << instance_to_json(instance).dump(2) << '\n';
}

void write_instance_file(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_instance(instance, out);
}

std::string instance_to_string(const Instance& instance) {
  std::ostringstream out;
  write_instance(instance, out);
  return out.str();
}

Instance read_instance(std::istream& source) { return instance_from_json(parse_stream(source)); }

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return read_instance(in);
}

Instance instance_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

void write_solution(const Instance& instance, const Solution& solution, std::ostream& sink) {
  sink << solution_to_json(instance, solution).dump(2) << '\n';
}

void write_solution_file(const Instance& instance, const Solution& solution,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_solution(instance, solution, out);
}

std::string solution_to_string(const Instance& instance, const Solution& solution) {
  std::ostringstream out;
  write_solution(instance, solution, out);
  return out.str();
}

LoadedSolution read_solution(std::istream& source) {
  return solution_from_json(parse_stream(source));
}

LoadedSolution read_solution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return read_solution(in);
}

bool stored_objective_matches(const Instance& instance, const LoadedSolution& loaded) {
  if (!loaded.objective) return true;
  return loaded.objective->purchase == objective_purchase(loaded.solution, instance.costs) &&
         loaded.objective->travel == objective_travel(instance, loaded.solution) &&
         loaded.objective->mode == instance.costs.objective_mode;
}

}  // namespace evrp

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "evrp/instance.hpp"
#include "evrp/solution.hpp"
#include "evrp/types.hpp"

namespace evrp {

// UTF-8 JSON with a schema_version marker, snake_case field names, matrices
// as row-major integer arrays, and sets as sorted index arrays. Output is
// byte-stable: identical data serializes to identical bytes everywhere.

inline constexpr const char* kInstanceSchema = "evrp-instance/1";
inline constexpr const char* kSolutionSchema = "evrp-solution/1";

void write_instance(const Instance& instance, std::ostream& sink);
void write_instance_file(const Instance& instance, const std::string& path);
std::string instance_to_string(const Instance& instance);

// Throws ParseError (with field path) on malformed syntax, unknown schema
// versions, or instance invariant breaches.
Instance read_instance(std::istream& source);
Instance read_instance_file(const std::string& path);
Instance instance_from_string(const std::string& text);

struct StoredObjective {
  Cost purchase = 0;
  Minutes travel = 0;
  ObjectiveMode mode = ObjectiveMode::weighted_sum;
};

struct LoadedSolution {
  Solution solution;
  std::optional<StoredObjective> objective;
};

// Solutions carry their objective components as redundant fields, verified
// against a recomputation when the instance is at hand.
void write_solution(const Instance& instance, const Solution& solution, std::ostream& sink);
void write_solution_file(const Instance& instance, const Solution& solution,
                         const std::string& path);
std::string solution_to_string(const Instance& instance, const Solution& solution);

LoadedSolution read_solution(std::istream& source);
LoadedSolution read_solution_file(const std::string& path);

// False when the stored objective disagrees with the recomputed one; callers
// surface this as a warning rather than an error.
bool stored_objective_matches(const Instance& instance, const LoadedSolution& loaded);

}  // namespace evrp

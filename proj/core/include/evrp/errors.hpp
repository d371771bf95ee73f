#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "evrp/types.hpp"

namespace evrp {

class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Routes or files referencing unknown locations, non-square matrices, and
// similar shape problems that are not expressible as constraint violations.
class StructuralError : public Error {
  using Error::Error;
};

// Input file cannot be parsed or breaks an invariant; carries the field path.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Instance exceeds a solver's enumeration limits or time budget.
class LimitError : public Error {
  using Error::Error;
};

// Proven infeasibility; names a blocking customer when one is identified.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& message,
                           std::optional<LocationId> blocking_customer = std::nullopt)
      : Error(message), blocking_customer_(blocking_customer) {}

  std::optional<LocationId> blocking_customer() const { return blocking_customer_; }

 private:
  std::optional<LocationId> blocking_customer_;
};

}  // namespace evrp

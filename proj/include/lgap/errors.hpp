#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lgap {

/// Operands live on different qubit counts or vector lengths.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested dense object exceeds the configured size limit.
struct capacity_error : std::length_error {
  using std::length_error::length_error;
};

/// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Eigenvalue iteration failed to converge.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Objective produced a non-finite value; `point` is where it happened.
struct optimization_error : std::runtime_error {
  optimization_error(const std::string& what, std::vector<double> at)
      : std::runtime_error(what), point(std::move(at)) {}
  std::vector<double> point;
};

/// Malformed run configuration. `line` is 0 when the problem is a missing field.
struct config_error : std::runtime_error {
  config_error(const std::string& what, int at_line, std::string at_field)
      : std::runtime_error(what), line(at_line), field(std::move(at_field)) {}
  int line;
  std::string field;
};

}  // namespace lgap

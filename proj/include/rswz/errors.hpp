#pragma once

#include <stdexcept>
#include <string>

namespace rswz {

// Invalid or inconsistent user input (config files, generator parameters, preconditions).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric routine failed to reach its tolerance (quadrature, root finding, blow-up).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a special function.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A user-supplied coefficient returned a non-finite value.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configured work budget exceeded before the sweep started.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rswz

#pragma once

#include <stdexcept>
#include <string>

namespace clearnet {

/// Input data failed validation: bad shapes, negative entries, holdings row
/// sums above one, singular I - Theta', parameters outside [0,1].
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A solver was invoked outside its stated preconditions (e.g. the elimination
/// method on a network with unequal charge parameters).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal failure: non-convergence, a singular frozen system, or a broken
/// postcondition. Indicates a bug or an input outside the model's assumptions.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace clearnet

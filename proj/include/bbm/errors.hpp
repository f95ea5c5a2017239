#pragma once

#include <stdexcept>
#include <string>

namespace bbm {

/// Invalid user-supplied configuration (bounds, degrees, penalty, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A query that cannot be answered, e.g. a point outside the mesh.
class QueryError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Solver breakdown or a blown-up time integration.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, long step = -1)
      : std::runtime_error(what), step_(step) {}

  /// Time step at which the failure was detected, or -1 if not applicable.
  long step() const { return step_; }

 private:
  long step_;
};

}  // namespace bbm

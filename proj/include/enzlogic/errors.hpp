#pragma once

#include <stdexcept>
#include <string>

namespace enzlogic {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An enzyme schedule is not defined somewhere it is needed.
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The error-controlled stepper could not meet its tolerance, or the state
/// left the unit box by more than roundoff.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A root could not be bracketed.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rate constraints hold but the equilibrium output lands between the
/// thresholds.
class ThresholdInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural problem in a netlist: name collisions, dangling or missing wires,
/// undeclared cycles.
class NetlistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A relaxation did not come within kappa of its target before the horizon.
class SettleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario file problem; the message carries the file, line and field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace enzlogic

#ifndef GRIDATTACK_ERRORS_HPP_
#define GRIDATTACK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gridattack::core {

// Violated API contract (bad dimensions, step-after-done, malformed input).
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// Structural problem with a case or model (singular admittance, dangling ids).
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values fed into a dynamics evaluation.
class InvalidStateError : public std::runtime_error {
 public:
  explicit InvalidStateError(const std::string& msg) : std::runtime_error(msg) {}
};

// Equilibrium back-solve failed (e.g. required actuation outside limits).
class InitializationError : public std::runtime_error {
 public:
  explicit InitializationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Newton corrector divergence during time stepping; carries last valid time.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& msg, double last_valid_time)
      : std::runtime_error(msg), last_valid_time(last_valid_time) {}
  double last_valid_time;
};

// Algebraic singularity / voltage collapse; distinct from ordinary errors so
// the RL environment can terminate the episode instead of aborting.
class SimulationCollapse : public std::runtime_error {
 public:
  SimulationCollapse(const std::string& msg, double time)
      : std::runtime_error(msg), time(time) {}
  double time;
};

class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed structured-text input; carries 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, long line = -1)
      : std::runtime_error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line(line) {}
  long line;
};

}  // namespace gridattack::core

#endif  // GRIDATTACK_ERRORS_HPP_

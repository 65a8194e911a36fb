#ifndef FRACAVITY_ERRORS_HPP
#define FRACAVITY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracavity {

// Invalid configuration: bad grid, inconsistent cavity parameters,
// unparsable config files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during propagation (norm blow-up and the like).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Threshold bracket does not straddle |sigma| = 1.
class BracketError : public std::runtime_error {
 public:
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

// y-cavity outside its stability range (complex Gaussian spot size).
class StabilityError : public std::runtime_error {
 public:
  explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative eigensolver did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

}  // namespace fracavity

#endif  // FRACAVITY_ERRORS_HPP

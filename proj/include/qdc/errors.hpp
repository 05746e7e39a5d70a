#pragma once

#include <stdexcept>
#include <string>

namespace qdc {

/// Invalid or inconsistent user input (bad labels, negative rates, conflicting drive spec).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: degenerate steady state, singular resolvent, unconverged quadrature.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read or written; the message names the path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qdc

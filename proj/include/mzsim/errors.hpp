#pragma once

#include <stdexcept>
#include <string>

namespace mzsim {

// Input files that fail to parse (weather CSV, building JSON).
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Linear system cannot be factorized; names the offending node when known.
class SingularSystemError : public std::runtime_error {
public:
  explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

// Pressure network failed to converge; carries the last residual norm.
class AirflowSolverError : public std::runtime_error {
public:
  AirflowSolverError(const std::string& what, double residual_norm)
      : std::runtime_error(what), residual_norm(residual_norm) {}
  double residual_norm;
};

} // namespace mzsim

#pragma once

#include <stdexcept>
#include <string>

namespace polarsl {

// Argument outside the open domain of a map, or a precondition on the
// geometry (positivity of a measure, dimension) violated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input data: non-monotone samples, duplicate points, bad files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature/ODE/Newton failure: refinement cap, step underflow, stagnation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A nonlinearity or coefficient could not be evaluated at the given nodes.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (CLI).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polarsl

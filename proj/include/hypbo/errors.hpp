#pragma once

#include <stdexcept>
#include <string>

namespace hypbo {

// Every library failure derives from one of these, so callers can map them to
// exit codes without string matching.

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejection sampling ran out of attempts before finding a feasible draw.
class FeasibilityBudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleHypothesis : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cholesky failed even at the largest jitter.
class IllConditionedKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ObjectiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-format errors.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypbo

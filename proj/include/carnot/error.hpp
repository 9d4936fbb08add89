#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

/// Malformed input that cannot even be checked (bad indices, empty strata).
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands built on different groups.
class SpecMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical procedure gave up; the message names the best attempt.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace carnot

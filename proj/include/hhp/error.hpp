#pragma once

#include <stdexcept>
#include <string>

namespace hhp {

/// Bad input: malformed descriptor, violated precondition, non-monotone lift.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// The computation itself cannot be trusted (conditioning, aliasing).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class AliasingError : public NumericalError {
 public:
  explicit AliasingError(const std::string& what) : NumericalError(what) {}
};

class ConditioningError : public NumericalError {
 public:
  explicit ConditioningError(const std::string& what) : NumericalError(what) {}
};

}  // namespace hhp

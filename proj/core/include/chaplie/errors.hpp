#pragma once

#include <stdexcept>
#include <string>

namespace chaplie {

/// Caller supplied something malformed: wrong dimensions, non-SPD inertia,
/// unknown algebra id, a state off the required level set, ...
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A structural construction did not produce the object it promised
/// (rank deficiency, non-closed bracket, ambiguous root clustering).
class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

/// Floating point breakdown during evaluation or integration.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chaplie

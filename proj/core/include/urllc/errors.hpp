#pragma once

#include <stdexcept>
#include <string>

namespace urllc {

// Raised when a caller passes arguments outside an operation's domain.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when an iterative numerical routine fails to converge.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace urllc

// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpredict {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed OpenQASM input. Carries the 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ":" + std::to_string(column) +
              ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A construct that is valid OpenQASM but outside the supported subset.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// An instruction that violates arity, parameter count, or register bounds.
class InvalidCircuitError : public Error {
 public:
  using Error::Error;
};

/// Device file or device model that fails validation.
class DeviceError : public Error {
 public:
  using Error::Error;
};

/// The circuit needs more qubits than the target device offers.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A gate that has no lowering rule to the requested native gate set.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Model files and classifier misuse.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpredict

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bddqsp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string &message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A diagram failed the checks an operation depends on.
class InvalidDiagram : public Error {
public:
  using Error::Error;
};

/// An internal node whose two outgoing weights are both zero.
class DegenerateNode : public Error {
public:
  using Error::Error;
};

/// The represented Boolean function has no satisfying assignment.
class Unsatisfiable : public Error {
public:
  using Error::Error;
};

/// A size cap (qubits, support entries, matrix dimension) was exceeded.
class ResourceLimit : public Error {
public:
  using Error::Error;
};

/// A gate or circuit violates the circuit IR invariants.
class InvalidCircuit : public Error {
public:
  using Error::Error;
};

} // namespace bddqsp

#pragma once

#include <stdexcept>
#include <string>

namespace pathcov {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: DSL syntax, unknown identifiers, bad CLI arguments.
/// The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  enum class Kind { syntax, duplicate_node, duplicate_edge, self_loop, unknown_node, too_many_nodes };

  ParseError(Kind kind, int line, int column, const std::string& what)
      : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

/// Structural misuse of the diagram builder (duplicate edge, self-loop, ...).
class DiagramError : public InputError {
 public:
  DiagramError(ParseError::Kind kind, const std::string& what) : InputError(what), kind_(kind) {}
  ParseError::Kind kind() const { return kind_; }

 private:
  ParseError::Kind kind_;
};

/// Errors that stem from the mathematics of a well-formed query.
/// The CLI maps these to exit code 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A conditioning set whose covariance block is singular, or a zero
/// intermediate partial variance.
class SingularError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The X-Y path is blocked by the conditioning set.
class ClosedPathError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A query that violates an operation's precondition (not singly-connected,
/// endpoint inside the conditioning set, ...).
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace pathcov

#ifndef IOPP_ERROR_HPP
#define IOPP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iopp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct OverflowError : Error {
  using Error::Error;
};

/// A protocol or transition violates a structural precondition (not IO, not in
/// normal form, undeclared state, ...).
struct ProtocolError : Error {
  using Error::Error;
};

/// A configured ceiling (stored minterms, graph nodes) was exceeded.
struct ResourceError : Error {
  ResourceError(std::string reason, std::string diagnostics)
      : Error(reason + (diagnostics.empty() ? "" : " (" + diagnostics + ")")),
        reason_(std::move(reason)),
        diagnostics_(std::move(diagnostics)) {}

  const std::string& reason() const noexcept { return reason_; }
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string reason_;
  std::string diagnostics_;
};

struct ParseError : Error {
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace iopp

#endif  // IOPP_ERROR_HPP

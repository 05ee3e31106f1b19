#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifes {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression source, with the byte offset of the failure.
class ParseError : public Error {
public:
  ParseError(std::size_t offset, std::string message, std::vector<std::string> expected = {})
      : Error(format(offset, message, expected)),
        offset_(offset),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  static std::string format(std::size_t offset, const std::string& message,
                            const std::vector<std::string>& expected) {
    std::string out = "parse error at byte " + std::to_string(offset) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  std::size_t offset_;
  std::string message_;
  std::vector<std::string> expected_;
};

/// A partial function received an argument outside its real domain.
class DomainError : public Error {
public:
  DomainError(double x, const std::string& what)
      : Error(what + " (at x = " + std::to_string(x) + ")"), x_(x) {}

  /// The value of the expression variable at which evaluation failed.
  double x() const noexcept { return x_; }

private:
  double x_;
};

/// Logarithmic conjugacy requested on an interval reaching zero or below.
class ZeroProblemError : public Error {
public:
  using Error::Error;
};

/// A grid function left its interval, or two grids do not match.
class RangeError : public Error {
public:
  using Error::Error;
};

/// A map that was supposed to be order-preserving was caught descending.
class MonotonicityViolation : public Error {
public:
  MonotonicityViolation(std::size_t from, std::size_t to, const std::string& what)
      : Error(what), from_(from), to_(to) {}

  std::size_t from() const noexcept { return from_; }
  std::size_t to() const noexcept { return to_; }

private:
  std::size_t from_;
  std::size_t to_;
};

}  // namespace ifes

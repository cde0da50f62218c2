#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pspkit {

// Argument outside the mathematical domain of an operation (m = 0, even
// Jacobi denominator, non-unit order query, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A cost or memory guard was exceeded.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed external input. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates an ordering or structural requirement.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition of a combining operation (e.g. merging
// overlapping segment counts).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pspkit

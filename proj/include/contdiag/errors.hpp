#ifndef CONTDIAG_ERRORS_HPP
#define CONTDIAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace contdiag {

/// Exponent budget exceeded or a value left the representable range.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two supposedly consistent enclosures turned out disjoint.  Always a bug
/// in an evaluator, never a property of the input.
struct InconsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Malformed input: bad formula text, bad code, bad table file.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  explicit ParseError(const std::string& msg)
      : std::runtime_error(msg), position(0) {}
  std::size_t position;
};

/// Precondition violation on an operation (arity mismatch, value out of
/// range, non-prenex input, class mismatch, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace contdiag

#endif

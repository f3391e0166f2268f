#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace functorad {

/// A point lies outside the region where a map or manifold is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller broke an operation's precondition (dimension mismatch, base
/// point mismatch, bad parameter).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state reached the excluded singular set, either directly or during an
/// integration step.
class SingularityError : public std::runtime_error {
 public:
  explicit SingularityError(const std::string& what)
      : std::runtime_error(what) {}
  SingularityError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  /// Integration step at which the failure happened, if any.
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  std::optional<std::size_t> step_;
};

/// Picard iteration failed to reach a fixed point.
class NonContractionError : public std::runtime_error {
 public:
  NonContractionError(const std::string& what, double last_change)
      : std::runtime_error(what), last_change_(last_change) {}
  double last_change() const noexcept { return last_change_; }

 private:
  double last_change_;
};

/// Malformed expression text or scenario config.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, std::size_t line, const std::string& msg)
      : std::runtime_error(format(field, line, msg)), field_(field), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, std::size_t line,
                            const std::string& msg) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + msg;
  }
  std::string field_;
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace functorad

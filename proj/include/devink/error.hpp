#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace devink {

/// Bad input data: malformed files, unknown labels, degenerate strokes,
/// infeasible configurations. The CLI maps this family to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stroke file line that could not be parsed.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// SMO hit its iteration cap before every KKT violation dropped below tolerance.
class ConvergenceError : public DataError {
 public:
  ConvergenceError(const std::string& what, double worst_violation)
      : DataError(what), worst_violation_(worst_violation) {}

  double worst_violation() const noexcept { return worst_violation_; }

 private:
  double worst_violation_;
};

}  // namespace devink

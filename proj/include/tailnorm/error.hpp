#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tailnorm {

/// Argument outside the support or parameter space of a model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sample carries too little information to estimate from (constant values,
/// zero quartile, vanishing denominators).
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tailnorm

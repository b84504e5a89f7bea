#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nullmodels {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain (u outside (0,1), odd stub total, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A statistic whose denominator vanishes on the given input
// (regular degree sequence for Pearson, no wedges for clustering).
class DegenerateStatistic : public Error {
 public:
  using Error::Error;
};

// A kernel or config that fails a structural check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Parameters that cannot meet the requested accuracy.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Monte Carlo experiment that cannot produce a result.
class ExperimentError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Quadrature that did not reach its tolerance; carries the best estimate.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double best_value, double error_bound)
      : Error(what), best_value_(best_value), error_bound_(error_bound) {}
  double best_value() const noexcept { return best_value_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_value_;
  double error_bound_;
};

}  // namespace nullmodels

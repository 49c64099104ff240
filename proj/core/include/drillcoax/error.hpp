#pragma once

#include <stdexcept>
#include <string>

namespace drillcoax {

/// Base class for every error raised by the library. Carries the name of the
/// module that raised it so front ends can attribute failures.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Invalid parameters or metadata (I = 0, D <= 0, min >= max, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input whose geometry makes the requested operation meaningless: zero-extent
/// bounding boxes, coincident markers, collinear circle points, flat depth
/// distributions.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Not enough samples to run an operation (e.g. an empty profile window).
class DataDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the supported domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// NaN/inf encountered during an iterative solve.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Simulation parameters that cannot produce a valid scan.
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents. `line()` is 1-based, 0 when unknown.
class ParseError : public IoError {
 public:
  ParseError(std::string module, const std::string& what, std::size_t line)
      : IoError(std::move(module), what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace drillcoax

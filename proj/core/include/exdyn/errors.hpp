#pragma once

#include <stdexcept>
#include <string>

namespace exdyn {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A point lies outside the domain E.
class DomainError : public Error {
public:
  using Error::Error;
};

// A model or analysis parameter is out of range (e.g. lambda <= 0 where a
// bound needs decay).
class ParameterError : public Error {
public:
  using Error::Error;
};

// Rejection sampling gave up, or a density evaluated nonpositive.
class SamplingError : public Error {
public:
  using Error::Error;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

// A precondition on the shape of a state was violated (wrong dimension,
// wrong category count, means out of order).
class ContractError : public Error {
public:
  using Error::Error;
};

// Configuration text could not be parsed or failed validation. `line` is
// 1-based and 0 when the error is not tied to a line; `field` names the
// offending key when known.
class ConfigError : public Error {
public:
  ConfigError(const std::string& what, int line = 0, std::string field = {})
      : Error(what), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

private:
  int line_;
  std::string field_;
};

}  // namespace exdyn

#pragma once

#include <stdexcept>
#include <string>

namespace kaonlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Missing, unknown or ill-typed configuration entry. Carries the offending key.
class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Input that parses but violates a documented invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. negative time).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Singular pseudo-spinor decomposition (1 - eps_s * eps_l == 0).
class SingularPreparation : public Error {
public:
  using Error::Error;
};

/// A rate was requested in a regime the model does not define.
class UnsupportedRegime : public Error {
public:
  using Error::Error;
};

/// Asymmetry denominator vanished.
class DegeneratePoint : public Error {
public:
  using Error::Error;
};

class GridMismatch : public Error {
public:
  using Error::Error;
};

/// Discretization too coarse for the requested accuracy.
class ResolutionError : public Error {
public:
  using Error::Error;
};

class IntegratorFailure : public Error {
public:
  using Error::Error;
};

class EmptySector : public Error {
public:
  using Error::Error;
};

/// Wraps an error raised inside one stage of the study pipeline.
class StageError : public Error {
public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

}  // namespace kaonlab

#pragma once

#include <stdexcept>
#include <string>

namespace radhydro {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density or temperature fell below the positivity floor.
class NonPositiveState : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during time stepping.
class BlowUp : public Error {
 public:
  using Error::Error;
};

class TimeMismatch : public Error {
 public:
  using Error::Error;
};

/// Perturbed initial data is no longer positive.
class PositivityLost : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// Kinetic data too far from the P1 subspace for a closure check.
class OffClosureManifold : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace radhydro

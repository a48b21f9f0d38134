#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fw {

// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidGridError : public Error {
public:
  using Error::Error;
};

// Non-finite data or grid/size mismatch in a field operation.
class InvalidFieldError : public Error {
public:
  using Error::Error;
};

class InvalidMollifierError : public Error {
public:
  using Error::Error;
};

class CflViolationError : public Error {
public:
  using Error::Error;
};

// Sobolev index outside the well-posedness regime (s <= 3/2).
class InvalidSobolevIndexError : public Error {
public:
  using Error::Error;
};

class SeedOutsideDomainError : public Error {
public:
  using Error::Error;
};

// A breaking criterion's preconditions do not hold for the given data.
class NotApplicableError : public Error {
public:
  using Error::Error;
};

class InvalidBoundsError : public Error {
public:
  using Error::Error;
};

class MismatchedInitialDataError : public Error {
public:
  using Error::Error;
};

class NoConvergenceError : public Error {
public:
  using Error::Error;
};

// A travelling-wave profile came within the guard margin of the pole phi = c.
class SingularityGuardError : public Error {
public:
  using Error::Error;
};

class InvalidPerturbationError : public Error {
public:
  using Error::Error;
};

// Expression or config syntax error; position is a 0-based character offset.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace fw

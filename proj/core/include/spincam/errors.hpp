#pragma once

#include <stdexcept>
#include <string>

namespace spincam {

// Every error thrown by the library derives from Error so callers (the CLI in
// particular) can map families of failures onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input: configuration, arguments, preconditions.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or unusable data.
class DataError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public UsageError {
 public:
  using UsageError::UsageError;
};

class InvalidConfig : public UsageError {
 public:
  using UsageError::UsageError;
};

class NonPositiveDepth : public DataError {
 public:
  NonPositiveDepth() : DataError("point has non-positive camera depth") {}
  using DataError::DataError;
};

class OutOfRange : public DataError {
 public:
  using DataError::DataError;
};

class NoObservations : public DataError {
 public:
  NoObservations() : DataError("no usable observations") {}
};

class InfeasibleWrench : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateBox : public DataError {
 public:
  DegenerateBox() : DataError("bounding box subtends zero angle") {}
};

class CardinalityMismatch : public DataError {
 public:
  using DataError::DataError;
};

class InsufficientOverlap : public DataError {
 public:
  InsufficientOverlap() : DataError("sequences do not overlap enough within the search window") {}
};

class NonFiniteValue : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class VersionMismatch : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace spincam

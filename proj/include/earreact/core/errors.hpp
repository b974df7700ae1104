#pragma once

#include <stdexcept>
#include <string>

namespace earreact {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function argument violates its documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A file or record could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Sensor streams of a session disagree in time.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent configuration (e.g. no note track for a song).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Not enough samples to compute a statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace earreact

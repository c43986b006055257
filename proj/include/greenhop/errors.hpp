#pragma once

#include <stdexcept>

namespace greenhop {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad in-memory arguments: non-finite coordinates, out-of-range counts,
/// dimension mismatches.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Unknown keys, unparsable values, or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or malformed external data: manifests, point files, layouts.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure while fitting: rank deficiency, singular systems.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Model file problems. Subclassed so callers can tell failure modes apart.
class ModelIoError : public Error {
 public:
  using Error::Error;
};

class ModelFormatError : public ModelIoError {
 public:
  using ModelIoError::ModelIoError;
};

class ModelVersionError : public ModelIoError {
 public:
  using ModelIoError::ModelIoError;
};

class ModelTruncationError : public ModelIoError {
 public:
  using ModelIoError::ModelIoError;
};

class ModelChecksumError : public ModelIoError {
 public:
  using ModelIoError::ModelIoError;
};

}  // namespace greenhop

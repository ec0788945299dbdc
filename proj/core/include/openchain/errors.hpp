#pragma once

#include <stdexcept>
#include <string>

namespace openchain {

// Every failure raised by the library derives from Error. The CLI maps the
// category to a process exit code (see tools/openchain.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Raised for configuration values that violate a ChainConfig invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised by the key=value configuration reader.
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A density matrix had an eigenvalue below the tolerated negative floor.
class PositivityError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Trace drift or positivity loss during integration; usually dt too large.
class InstabilityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace openchain

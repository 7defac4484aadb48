#pragma once

#include <stdexcept>
#include <string>

namespace mmwfp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A caller passed arguments outside an operation's domain.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// Configuration or codebook parameters are inconsistent.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A learning point or UE position is not reachable by some WiFi AP.
class CoverageError : public Error {
public:
  using Error::Error;
};

/// A mm-w AP has no sector with stored exemplars, so nothing can be estimated.
class NoCoverageError : public Error {
public:
  using Error::Error;
};

/// Malformed or truncated input file.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Radio map on disk does not match the current codebook, version or shape.
class StaleMapError : public Error {
public:
  using Error::Error;
};

} // namespace mmwfp

#pragma once

#include <stdexcept>
#include <string>

namespace pointcouple {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The scattering matrix has an eigenphase too close to pi, where the
/// Cayley transform diverges; no point-coupling matrix exists for it.
class NonRepresentableDevice : public Error {
 public:
  using Error::Error;
};

/// A shifted envelope would carry non-negligible amplitude off the grid.
class GridOverflow : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownFrequencyLabel : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// MPS bond dimension exceeded the configured cap.
class BondExplosion : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration; `field()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error("config error: field '" + field + "': " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace pointcouple

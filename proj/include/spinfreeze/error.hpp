#pragma once

#include <stdexcept>
#include <string>

namespace spinfreeze {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition (Hermiticity, unit trace, positivity) failed.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Time stepping produced an unphysical state.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double time_us)
      : Error(what), time_us_(time_us) {}
  double time_us() const noexcept { return time_us_; }

 private:
  double time_us_;
};

/// A scenario or config file is invalid; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  IoError(std::string path, const std::string& what) : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace spinfreeze

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file failed to parse. line() is 1-based; 0 when not line-specific.
class MalformedFileError : public Error {
 public:
  MalformedFileError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what), line_{line} {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class MissingPredictionError : public Error {
 public:
  using Error::Error;
};

/// The calibration window has no eligible record yet.
class WarmupError : public Error {
 public:
  using Error::Error;
};

/// Internal bookkeeping contract broken (e.g. a check staged twice).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what) : Error(field + ": " + what), field_{field} {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace ecp

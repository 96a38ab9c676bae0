#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bdb {

enum class ErrorKind {
  Config,          // usage / configuration problems (CLI exit code 1)
  Data,            // malformed input data
  ZeroCountArm,
  UndefinedBias,
  DivisionHazard,
  OutOfRange,
  Numeric,
  LogOfZero,
  EnumerationCap,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

/// An arm has no observations, so its sample mean (and any bootstrap law
/// built from it) does not exist. `arm()` is 0-based.
class ZeroCountArm : public Error {
 public:
  explicit ZeroCountArm(std::size_t arm)
      : Error(ErrorKind::ZeroCountArm,
              "arm " + std::to_string(arm + 1) + " has zero pulls"),
        arm_(arm) {}
  std::size_t arm() const noexcept { return arm_; }

 private:
  std::size_t arm_;
};

class UndefinedBias : public Error {
 public:
  explicit UndefinedBias(std::size_t arm)
      : Error(ErrorKind::UndefinedBias,
              "arm " + std::to_string(arm + 1) +
                  " was never pulled in any bootstrap replay"),
        arm_(arm) {}
  std::size_t arm() const noexcept { return arm_; }

 private:
  std::size_t arm_;
};

/// Zero propensity on a chosen arm. `round()` is 1-based like the log files.
class DivisionHazard : public Error {
 public:
  explicit DivisionHazard(std::size_t round)
      : Error(ErrorKind::DivisionHazard,
              "zero propensity for the chosen arm at t=" + std::to_string(round)),
        round_(round) {}
  std::size_t round() const noexcept { return round_; }

 private:
  std::size_t round_;
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& what) : Error(ErrorKind::OutOfRange, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

class LogOfZero : public Error {
 public:
  explicit LogOfZero(const std::string& what) : Error(ErrorKind::LogOfZero, what) {}
};

class EnumerationCapExceeded : public Error {
 public:
  explicit EnumerationCapExceeded(const std::string& what)
      : Error(ErrorKind::EnumerationCap,
              what + " (use a Monte Carlo estimate with its standard error instead)") {}
};

}  // namespace bdb

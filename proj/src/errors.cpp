#include "bandit_debias/errors.hpp"

namespace bdb {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Data: return "data";
    case ErrorKind::ZeroCountArm: return "zero_count_arm";
    case ErrorKind::UndefinedBias: return "undefined_bias";
    case ErrorKind::DivisionHazard: return "division_hazard";
    case ErrorKind::OutOfRange: return "out_of_range";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::LogOfZero: return "log_of_zero";
    case ErrorKind::EnumerationCap: return "enumeration_cap";
  }
  return "unknown";
}

}  // namespace bdb

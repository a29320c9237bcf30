#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace netest {

// Every failure the library reports carries one of these codes.
enum class ErrorCode : std::uint8_t {
  NotSquare,
  Asymmetric,
  NonzeroDiagonal,
  OutOfRange,
  ShapeMismatch,
  IndexOutOfRange,
  InvalidSpec,
  InvalidParams,
  EmptyNetwork,
  EmptyMask,
  NonPositiveStep,
  ZeroReferenceError,
  DegenerateAllZero,
  NonFiniteCost,
  ScheduleStall,
  ParseError,
  IoFailure,
};

// Coarse grouping used by the command line front end for exit statuses.
enum class ErrorCategory : std::uint8_t { Validation, Numerical, Io };

constexpr ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteCost:
    case ErrorCode::ScheduleStall:
    case ErrorCode::DegenerateAllZero:
    case ErrorCode::ZeroReferenceError:
    case ErrorCode::EmptyNetwork:
      return ErrorCategory::Numerical;
    case ErrorCode::IoFailure:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Validation;
  }
}

constexpr const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::NonPositiveStep: return "NonPositiveStep";
    case ErrorCode::ZeroReferenceError: return "ZeroReferenceError";
    case ErrorCode::DegenerateAllZero: return "DegenerateAllZero";
    case ErrorCode::NonFiniteCost: return "NonFiniteCost";
    case ErrorCode::ScheduleStall: return "ScheduleStall";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Matrix entry position, zero-based. Messages print it one-based.
struct EntryIndex {
  long row = 0;
  long col = 0;
  friend bool operator==(const EntryIndex&, const EntryIndex&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<EntryIndex> where = std::nullopt)
      : std::runtime_error(compose(code, what, where)), code_(code), where_(where) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }
  const std::optional<EntryIndex>& where() const noexcept { return where_; }

 private:
  static std::string compose(ErrorCode code, const std::string& what,
                             const std::optional<EntryIndex>& where) {
    std::string msg = to_string(code);
    if (where) {
      msg += " at (" + std::to_string(where->row + 1) + "," +
             std::to_string(where->col + 1) + ")";
    }
    if (!what.empty()) msg += ": " + what;
    return msg;
  }

  ErrorCode code_;
  std::optional<EntryIndex> where_;
};

}  // namespace netest

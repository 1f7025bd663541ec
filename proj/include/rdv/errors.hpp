#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rdv {

// Base type for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input that is not merely truncated (bad magic, bad header field).
struct ParseError : Error {
  using Error::Error;
};

// Input ends before the declared payload does.
struct TruncationError : Error {
  using Error::Error;
};

// Recognized but unsupported input variant (e.g. non-4:2:0 chroma).
struct UnsupportedFormat : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Geometry violates a precondition (plane size mismatch, frame too small).
struct DimensionError : Error {
  using Error::Error;
};

// Illegal configuration value or combination.
struct ConfigError : Error {
  using Error::Error;
};

// A coding schedule violates one of its structural invariants.
struct ScheduleInvariantError : Error {
  using Error::Error;
};

// Corrupted or exhausted coded stream.
struct BitstreamError : Error {
  using Error::Error;
};

// Numeric argument outside its legal range.
struct RangeError : Error {
  using Error::Error;
};

// Rate-distortion curves share no quality interval.
struct OverlapError : Error {
  using Error::Error;
};

struct VersionError : Error {
  using Error::Error;
};

// Bit budget below the minimum achievable total. Carries that minimum so
// callers can report how far off the request was.
struct BudgetError : Error {
  BudgetError(const std::string& msg, std::uint64_t min_bits)
      : Error(msg), min_achievable_bits(min_bits) {}
  std::uint64_t min_achievable_bits = 0;
};

}  // namespace rdv

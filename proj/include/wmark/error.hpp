#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wmark {

enum class Errc {
  MalformedHeader,
  UnsupportedMaxval,
  TruncatedData,
  DimensionOverflow,
  BadHeader,
  LengthMismatch,
  DimensionMismatch,
  CapacityExceeded,
  OddDimensions,
  GeometryMismatch,
  MapInconsistent,
  BadMetadata,
  RangeViolation,
  InvalidArgument,
  Io,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::UnsupportedMaxval: return "UnsupportedMaxval";
    case Errc::TruncatedData: return "TruncatedData";
    case Errc::DimensionOverflow: return "DimensionOverflow";
    case Errc::BadHeader: return "BadHeader";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::CapacityExceeded: return "CapacityExceeded";
    case Errc::OddDimensions: return "OddDimensions";
    case Errc::GeometryMismatch: return "GeometryMismatch";
    case Errc::MapInconsistent: return "MapInconsistent";
    case Errc::BadMetadata: return "BadMetadata";
    case Errc::RangeViolation: return "RangeViolation";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code is stable and is what
/// callers (and the command-line tool) dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wmark

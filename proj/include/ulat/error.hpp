#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ulat {

enum class Errc {
  SpanIncomplete,
  NotUnital,
  SizeCap,
  InvalidRing,
  ParseError,
  NotApproxIdempotent,
  NotLocal,
  NotSL,
  NotUnit,
  OrderCap,
  Disconnected,
  NotInIdeal,
  ZeroElement,
  PreconditionFailed,
  LevelTooLow,
  BadDimension,
  NoConvergence,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::SpanIncomplete: return "SpanIncomplete";
    case Errc::NotUnital: return "NotUnital";
    case Errc::SizeCap: return "SizeCap";
    case Errc::InvalidRing: return "InvalidRing";
    case Errc::ParseError: return "ParseError";
    case Errc::NotApproxIdempotent: return "NotApproxIdempotent";
    case Errc::NotLocal: return "NotLocal";
    case Errc::NotSL: return "NotSL";
    case Errc::NotUnit: return "NotUnit";
    case Errc::OrderCap: return "OrderCap";
    case Errc::Disconnected: return "Disconnected";
    case Errc::NotInIdeal: return "NotInIdeal";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::LevelTooLow: return "LevelTooLow";
    case Errc::BadDimension: return "BadDimension";
    case Errc::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; `code()`
/// identifies the condition and `what()` carries "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ulat

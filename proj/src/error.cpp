#include "rmt/error.hpp"

namespace rmt {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonPositivePrice: return "NonPositivePrice";
    case Errc::TooShort: return "TooShort";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::LagTooLarge: return "LagTooLarge";
    case Errc::BadCoefficient: return "BadCoefficient";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::BadDimensions: return "BadDimensions";
    case Errc::BadSpectrum: return "BadSpectrum";
    case Errc::BadParameters: return "BadParameters";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::NonMonotoneDensityIntegral: return "NonMonotoneDensityIntegral";
    case Errc::WindowTooNarrow: return "WindowTooNarrow";
    case Errc::DomainError: return "DomainError";
    case Errc::OutsideSupport: return "OutsideSupport";
    case Errc::BadExponent: return "BadExponent";
    case Errc::EntryOutOfRange: return "EntryOutOfRange";
    case Errc::SingularCovariance: return "SingularCovariance";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace rmt

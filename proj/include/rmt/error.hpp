#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmt {

enum class Errc {
  NonPositivePrice,
  TooShort,
  ZeroVariance,
  LagTooLarge,
  BadCoefficient,
  NotPositiveDefinite,
  DimensionMismatch,
  BadDimensions,
  BadSpectrum,
  BadParameters,
  GridTooCoarse,
  EmptyWindow,
  NonMonotoneDensityIntegral,
  WindowTooNarrow,
  DomainError,
  OutsideSupport,
  BadExponent,
  EntryOutOfRange,
  SingularCovariance,
  ParseError,
};

std::string_view to_string(Errc code);

/// Every fatal failure in the library surfaces as an Error carrying one of
/// the codes above; the message holds the offending row/column/value.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rmt

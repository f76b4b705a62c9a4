#pragma once

#include <doctest.h>

#include <optional>

#include "rmt/error.hpp"

namespace testing {

/// Code of the rmt::Error thrown by f, or nullopt when nothing is thrown.
template <class F>
std::optional<rmt::Errc> error_of(F&& f) {
  try {
    f();
  } catch (const rmt::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing

#define CHECK_ERRC(expr, code) CHECK(testing::error_of([&] { (void)(expr); }) == std::optional<rmt::Errc>(code))

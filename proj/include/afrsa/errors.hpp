#pragma once

#include <stdexcept>

namespace afrsa {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct NoPathError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct InvalidModelError : Error { using Error::Error; };
struct EmptySamplesError : Error { using Error::Error; };
struct BadGranularityError : Error { using Error::Error; };
struct EpsilonTooLargeError : Error { using Error::Error; };
struct NonPositiveUtilityError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };

}  // namespace afrsa

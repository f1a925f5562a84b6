#pragma once

#include <stdexcept>
#include <string>

namespace shockfit {

/// Base class for all library errors; the CLI catches this one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };           // bad call arguments (equal endstates, ...)
struct ParamError : Error { using Error::Error; };            // invalid numeric parameters
struct SpanError : Error { using Error::Error; };             // sampling outside a fan's span
struct BlowupError : Error { using Error::Error; };           // query beyond a detected blow-up
struct ValidityError : Error { using Error::Error; };         // query beyond a path's valid window
struct FitError : Error { using Error::Error; };              // unusable regression input
struct SpectralMarginError : Error { using Error::Error; };   // Re(lambda) <= sup b
struct EllipticityError : Error { using Error::Error; };      // transport coefficient vanishes on the grid
struct InstabilityError : Error { using Error::Error; };      // non-finite finite-volume cell
struct ConfigError : Error { using Error::Error; };
struct WindowError : Error { using Error::Error; };           // mismatched comparison windows
struct IoError : Error { using Error::Error; };

}  // namespace shockfit

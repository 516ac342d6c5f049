#pragma once

#include <stdexcept>
#include <string>

namespace vbchain {

// Base class for every error thrown by the library. The CLI maps these to
// exit code 1 (except UsageError -> 2 and FileNotFound -> 3).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- kernel construction -------------------------------------------------
struct NonStochastic final : Error { using Error::Error; };
struct NotReversible final : Error { using Error::Error; };
struct NonPositivePi final : Error { using Error::Error; };
struct NonUniqueStationary final : Error { using Error::Error; };
struct BadMixtureWeight final : Error { using Error::Error; };
struct WindowTooSmall final : Error { using Error::Error; };
struct DegenerateMarginal final : Error { using Error::Error; };

// --- spectral -------------------------------------------------------------
struct ZeroPiEntry final : Error { using Error::Error; };
struct NoConvergence final : Error { using Error::Error; };
struct DimensionMismatch final : Error { using Error::Error; };

// --- variance ---------------------------------------------------------------
struct LambdaAtOne final : Error { using Error::Error; };

// --- ordering ---------------------------------------------------------------
struct MismatchedStationary final : Error { using Error::Error; };
// Internal-consistency failure: a certified domination was contradicted by
// the computed spectra/variances. Should never fire for valid inputs.
struct OrderingViolation final : Error { using Error::Error; };

// --- finite Metropolis-Hastings ---------------------------------------------
struct NonPositiveTarget final : Error { using Error::Error; };
struct RowSumExceedsOne final : Error { using Error::Error; };
struct BadScale final : Error { using Error::Error; };

// --- continuous samplers ------------------------------------------------------
struct InvalidState final : Error { using Error::Error; };
struct NonPositiveState final : Error { using Error::Error; };
struct DomainError final : Error { using Error::Error; };
struct BadGrid final : Error { using Error::Error; };

// --- simulation -----------------------------------------------------------
struct TraceTooShort final : Error { using Error::Error; };
struct InvalidStart final : Error { using Error::Error; };

// --- I/O and CLI -----------------------------------------------------------
struct ParseError final : Error { using Error::Error; };
struct FileNotFound final : Error { using Error::Error; };
struct UsageError final : Error { using Error::Error; };

}  // namespace vbchain

#pragma once

#include <stdexcept>
#include <string>

namespace fidgap {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularInput : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotFaithful : Error { using Error::Error; };
struct WeightTooLarge : Error { using Error::Error; };
struct NegativeTime : Error { using Error::Error; };
struct InvalidTime : Error { using Error::Error; };
struct DegenerateBinning : Error { using Error::Error; };
struct UnsupportedAssignment : Error { using Error::Error; };
struct NotDetailedBalance : Error { using Error::Error; };
struct InvalidGap : Error { using Error::Error; };
struct ModularNotTrivialOnQ : Error { using Error::Error; };
struct UnknownParameter : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };

}  // namespace fidgap

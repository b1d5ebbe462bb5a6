#pragma once

#include <stdexcept>
#include <string>

namespace rapg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RAPG_DECLARE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    explicit Name(const std::string& msg) \
        : Error(#Name ": " + msg) {}      \
  }

RAPG_DECLARE_ERROR(ShapeMismatch);
RAPG_DECLARE_ERROR(AntipodalPoints);
RAPG_DECLARE_ERROR(DomainError);
RAPG_DECLARE_ERROR(NotOrthonormal);
RAPG_DECLARE_ERROR(NotSameOrthant);
RAPG_DECLARE_ERROR(InvalidParams);
RAPG_DECLARE_ERROR(DimensionTooLarge);
RAPG_DECLARE_ERROR(NonConvexBall);
RAPG_DECLARE_ERROR(LEscalationDiverged);
RAPG_DECLARE_ERROR(InsufficientTail);
RAPG_DECLARE_ERROR(NonPositiveGap);
RAPG_DECLARE_ERROR(NonFiniteValue);
RAPG_DECLARE_ERROR(ConfigError);

#undef RAPG_DECLARE_ERROR

}  // namespace rapg

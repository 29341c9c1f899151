#pragma once

#include <stdexcept>
#include <string>

namespace latkpp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LATKPP_DECLARE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

LATKPP_DECLARE_ERROR(DomainError);
LATKPP_DECLARE_ERROR(BracketError);
LATKPP_DECLARE_ERROR(NoRoot);
LATKPP_DECLARE_ERROR(AssumptionViolated);
LATKPP_DECLARE_ERROR(UnboundedCorrector);
LATKPP_DECLARE_ERROR(StepSizeError);
LATKPP_DECLARE_ERROR(BlowUp);
LATKPP_DECLARE_ERROR(Undefined);
LATKPP_DECLARE_ERROR(KTooSmall);
LATKPP_DECLARE_ERROR(NotSqueezed);
LATKPP_DECLARE_ERROR(MarginViolated);
LATKPP_DECLARE_ERROR(NoCrossing);
LATKPP_DECLARE_ERROR(PoorFit);
LATKPP_DECLARE_ERROR(ValidationError);

#undef LATKPP_DECLARE_ERROR

}  // namespace latkpp

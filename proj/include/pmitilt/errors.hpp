#pragma once

#include <stdexcept>
#include <string>

namespace pmitilt {

enum class ErrorKind {
  Spec,                 // malformed argument or unknown variable
  Schema,               // input file violates its JSON schema
  ZeroMassContext,      // conditioning event has probability zero
  UndefinedPMI,         // P(x|y) = 0, log-ratio has no meaning
  SupportViolation,     // candidate puts mass outside the prior support
  DegenerateProblem,    // prior has no usable support
  InfiniteInteraction,  // -inf interaction cell where a finite reward was required
  InadmissibleSignal,   // interaction does not normalize against its prior
  CoverageMismatch,     // tables do not cover the same contexts / cells
  InvalidBounds,        // countable tail bound not nonincreasing
  NotFinite,            // countable certificate is not finite
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define PMITILT_DEFINE_ERROR(Name, Kind)                                \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

PMITILT_DEFINE_ERROR(SpecError, Spec)
PMITILT_DEFINE_ERROR(SchemaError, Schema)
PMITILT_DEFINE_ERROR(ZeroMassContext, ZeroMassContext)
PMITILT_DEFINE_ERROR(UndefinedPMI, UndefinedPMI)
PMITILT_DEFINE_ERROR(SupportViolation, SupportViolation)
PMITILT_DEFINE_ERROR(DegenerateProblem, DegenerateProblem)
PMITILT_DEFINE_ERROR(InfiniteInteraction, InfiniteInteraction)
PMITILT_DEFINE_ERROR(InadmissibleSignal, InadmissibleSignal)
PMITILT_DEFINE_ERROR(CoverageMismatch, CoverageMismatch)
PMITILT_DEFINE_ERROR(InvalidBounds, InvalidBounds)
PMITILT_DEFINE_ERROR(NotFinite, NotFinite)

#undef PMITILT_DEFINE_ERROR

}  // namespace pmitilt

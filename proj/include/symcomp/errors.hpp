#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symcomp {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define SYMCOMP_ERROR_TYPE(Name)                                               \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
  };

/* predicate context */
SYMCOMP_ERROR_TYPE(NameClash)
SYMCOMP_ERROR_TYPE(InvalidBundle)
SYMCOMP_ERROR_TYPE(ContextMismatch)
SYMCOMP_ERROR_TYPE(TypeMismatch)
SYMCOMP_ERROR_TYPE(SupportError)
SYMCOMP_ERROR_TYPE(CountOverflow)
SYMCOMP_ERROR_TYPE(MemoryCap)

/* grids and quantizers */
SYMCOMP_ERROR_TYPE(OutOfDomain)
SYMCOMP_ERROR_TYPE(BadCell)
SYMCOMP_ERROR_TYPE(StrictnessError)

/* concrete functions */
SYMCOMP_ERROR_TYPE(ParseError)
SYMCOMP_ERROR_TYPE(UnboundVariable)
SYMCOMP_ERROR_TYPE(UndefinedOnBox)
SYMCOMP_ERROR_TYPE(NotMonotone)

/* module algebra */
SYMCOMP_ERROR_TYPE(AlgebraicLoop)
SYMCOMP_ERROR_TYPE(OutputClash)
SYMCOMP_ERROR_TYPE(NotAnOutput)
SYMCOMP_ERROR_TYPE(PairingError)

/* tooling */
SYMCOMP_ERROR_TYPE(ValidationError)
SYMCOMP_ERROR_TYPE(FormatError)

#undef SYMCOMP_ERROR_TYPE

/// Thrown when a traversal blows through its wall-clock budget. Carries how
/// far it got so progress can still be reported.
class TimeBudgetExceeded : public Error {
public:
  TimeBudgetExceeded(const std::string& what, std::uint64_t cells_done)
      : Error(what), cells_done(cells_done) {}
  std::uint64_t cells_done;
};

} // namespace symcomp

#pragma once

#include <stdexcept>
#include <string>

namespace mldr {

// Every failure in the library surfaces as a typed exception derived from
// Error, so callers can catch coarsely (Error) or by specific condition.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error { using Error::Error; };
struct InvalidPoints : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct DuplicateNode : Error { using Error::Error; };
struct SelfRepair : Error { using Error::Error; };
struct InvalidRepairSet : Error { using Error::Error; };
struct NotEnoughShares : Error { using Error::Error; };
struct EmptySystem : Error { using Error::Error; };
struct ModelTooLarge : Error { using Error::Error; };
struct InvalidGrouping : Error { using Error::Error; };
struct UnknownName : Error { using Error::Error; };
struct SolverError : Error { using Error::Error; };
struct CertificateInvalid : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct SimulationFault : Error { using Error::Error; };
struct InternalError : Error { using Error::Error; };

}  // namespace mldr

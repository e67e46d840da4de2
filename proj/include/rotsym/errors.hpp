#pragma once

#include <stdexcept>
#include <string>

namespace rotsym {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct CapabilityError : Error { using Error::Error; };
struct IntegrationError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct IdentifiabilityError : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct PrecisionError : Error { using Error::Error; };
struct FitError : Error { using Error::Error; };
struct RegionValidityError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace rotsym

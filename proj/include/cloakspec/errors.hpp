#pragma once

#include <stdexcept>
#include <string>

namespace cloakspec {

/// Base of every error raised by the library. `kind()` is the short class
/// name used in CLI diagnostics (`error: <kind>: <detail>`).
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define CLOAKSPEC_DEFINE_ERROR(Name, tag)                                      \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& detail) : Error(tag, detail) {}           \
  };

CLOAKSPEC_DEFINE_ERROR(ParameterError, "parameter")
CLOAKSPEC_DEFINE_ERROR(RangeError, "range")
CLOAKSPEC_DEFINE_ERROR(DomainError, "domain")
CLOAKSPEC_DEFINE_ERROR(GeometryError, "geometry")
CLOAKSPEC_DEFINE_ERROR(AssemblyError, "assembly")
CLOAKSPEC_DEFINE_ERROR(ResonanceError, "resonance")
CLOAKSPEC_DEFINE_ERROR(InconsistencyError, "inconsistency")
CLOAKSPEC_DEFINE_ERROR(SolverError, "solver")
CLOAKSPEC_DEFINE_ERROR(ResolutionError, "resolution")
CLOAKSPEC_DEFINE_ERROR(ConfigurationError, "configuration")
CLOAKSPEC_DEFINE_ERROR(InternalError, "internal")
CLOAKSPEC_DEFINE_ERROR(IoError, "io")

#undef CLOAKSPEC_DEFINE_ERROR

}  // namespace cloakspec

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cloakspec {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParameter = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitResolution = 4;

/// Runs one command, e.g. {"mesh", "--shape", "disk", ..., "--out", "m.json"}.
/// Diagnostics go to `err` as `error: <class>: <detail>`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace cloakspec

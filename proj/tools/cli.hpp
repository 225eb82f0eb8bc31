#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opilab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 2;  // Violated/Errored reports or a rejected certificate
inline constexpr int kExitConfig = 3;    // bad flags, config or parameters

/// Runs one command line (without the program name). Every path returns one
/// of kExitOk, kExitViolated, kExitConfig.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opilab::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shadowkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;

/// Runs one invocation. `args` excludes the program name. Returns 0 on
/// success, 1 on usage/validation errors, 2 on I/O errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shadowkit::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spincam::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

inline constexpr const char* kToolkitVersion = "0.3.0";

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spincam::cli

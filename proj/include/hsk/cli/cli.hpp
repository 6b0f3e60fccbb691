#pragma once

#include <string>
#include <vector>

namespace hsk::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Parse and run one command line. Returns the process exit code; errors
/// are reported on stderr.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace hsk::cli

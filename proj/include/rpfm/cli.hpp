#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpfm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitUsage = 3;

/// Entry point shared by the `rpfm` binary and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpfm::cli

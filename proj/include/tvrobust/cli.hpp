#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tvrobust {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tvrobust

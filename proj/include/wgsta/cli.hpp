#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wgsta {

// Exit codes: 0 success, 2 argument/usage error, 3 numerical or I/O failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFailure = 3;

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wgsta

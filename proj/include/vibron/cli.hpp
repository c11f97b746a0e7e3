// cli.hpp — command-line surface.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vibron {

// Dispatches the CLI. Exit codes: 0 success, 1 validation failure,
// 2 numerical failure.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

} // namespace vibron

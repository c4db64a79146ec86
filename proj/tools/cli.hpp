#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lotva::cli {

// Exit codes of the command line tool.
inline constexpr int exit_pass = 0;
inline constexpr int exit_negative = 1;
inline constexpr int exit_input = 2;
inline constexpr int exit_internal = 3;

// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lotva::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dlrkit {

/// Runs one subcommand; returns the process exit code (0 computed verdict,
/// 2 input error, 3 size limit, 4 internal error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlrkit

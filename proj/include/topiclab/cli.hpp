#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topiclab::cli {

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on a runtime error (message on `err`), 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

/// Parses `lo..hi` (inclusive). Throws Error(InvalidArgument).
std::vector<int> parse_k_range(const std::string& text);

}  // namespace topiclab::cli

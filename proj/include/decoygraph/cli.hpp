#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace decoygraph {

/// Runs one decoygraph subcommand. `args` excludes the program name.
/// Returns 0 on success, 1 on validation/usage/file errors, 2 on numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace decoygraph

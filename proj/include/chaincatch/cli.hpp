#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chaincatch/config.hpp"
#include "chaincatch/experiments.hpp"

namespace chaincatch {

// Exit codes: 0 success, 1 domain or invariant error, 2 usage error.
// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Resolves a batch matrix; "agents" may list several counts ("10,20").
MatrixSpec resolve_matrix_spec(RunManifest& manifest);

} // namespace chaincatch

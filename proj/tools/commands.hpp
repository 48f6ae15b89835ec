#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dds/error.hpp"

namespace dds::cli {

/// Exit codes: 0 success, 1 internal error, 2 validation / configuration / io
/// (including bad usage), 3 alignment, 4 numeric degeneracy.
int exit_code_for(ErrorKind kind);

/// Runs `dds <args...>` (args excludes the program name). Results go to `out`
/// (and to --out files), diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dds::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orlicz {

/// Runs one command line, program name excluded. Subcommands: young, kernel, norm, op, check, suite.
/// Returns 0 on success, 1 when a check fails, 2 on a usage or parse error (one diagnostic line on err).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orlicz

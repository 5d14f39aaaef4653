#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infothermo::cli {

/// Runs the command line `args` (without the program name). Returns 0 when
/// every requested check passes, 1 when a check fails and 2 on usage, parse
/// or domain errors.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace infothermo::cli

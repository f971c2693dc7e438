#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dimdecon {

// Runs the dimdecon command line. `args` excludes the program name. Returns
// the process exit code: 0 on success, 1 on input errors (bad flags, bad
// files, rejected arguments), 2 on internal errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dimdecon

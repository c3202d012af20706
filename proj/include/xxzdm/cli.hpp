#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xxzdm {

/// Entry point of the command-line tool. Returns 0 on success, 1 on numerical
/// failure, 2 on usage errors; documents go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace xxzdm

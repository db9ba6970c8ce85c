#pragma once
// Command-line entry points. Kept in the library so the commands can be
// exercised in-process; the binary under tools/ is a thin wrapper.

#include <iosfwd>
#include <string>
#include <vector>

namespace avm {

// Exit codes: 0 success/equiv, 1 distinct (or failed validation),
// 2 unknown, 3 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace avm

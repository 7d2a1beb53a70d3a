#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adiacross {

// Exit codes: 0 success, 1 computation error, 2 usage error.
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adiacross

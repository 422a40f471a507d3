#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttcore {

// Exit codes: 0 success, 1 usage or input error, 2 solver error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ttcore

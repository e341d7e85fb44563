#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ellmem {

// Exit codes: 0 success, 2 usage or domain error, 3 numeric failure.
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ellmem

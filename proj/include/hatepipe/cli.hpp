#pragma once

#include <ostream>

namespace hatepipe {

// Exit codes: 0 success, 1 invalid arguments/config/resources, 2 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hatepipe

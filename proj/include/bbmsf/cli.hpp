#pragma once

#include <ostream>

namespace bbmsf {

// Exit codes: 0 success, 1 numerical failure, 2 configuration or usage error.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bbmsf

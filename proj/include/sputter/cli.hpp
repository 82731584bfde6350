#pragma once

#include <iosfwd>

namespace sputter {

// Exit codes: 0 success, 1 certification FAIL (verify), 2 validation/config error, 3 numerical error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace sputter

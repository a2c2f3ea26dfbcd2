#pragma once

#include <iosfwd>

namespace realdyn {

/// Runs one command line. Returns 0 on success, 2 on invalid input and 3 on
/// numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace realdyn

#pragma once

#include <iosfwd>

namespace evshape::cli {

// Exit codes: 0 ran, 2 a test subcommand rejected its null, 1 error.
int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace evshape::cli

#pragma once

#include <iosfwd>

namespace steinrmt {

/// Command-line entry point. Exit codes: 0 success, 1 invalid usage or
/// configuration, 2 a verification check failed.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace steinrmt

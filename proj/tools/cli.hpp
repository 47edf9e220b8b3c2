#pragma once

#include <iosfwd>

namespace planpeer {

/// Runs the `planpeer` command line. Returns 0 on success, 1 when a pipeline
/// step fails and 2 for usage or configuration errors.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace planpeer

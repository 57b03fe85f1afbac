#pragma once

namespace mwca::cli {

/// Entry point of the command-line tool. Returns 0 on success, 1 on input
/// or usage errors, 2 when a verification check fails.
int run(int argc, const char* const* argv);

}  // namespace mwca::cli

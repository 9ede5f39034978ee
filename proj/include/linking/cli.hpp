#pragma once

#include <iosfwd>

namespace linking {

/// Exit codes: 0 accepted, 2 rejected or not converged, 1 invalid input.
inline constexpr int kExitAccepted = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRejected = 2;

/// Entry point of the `linking` tool; writes to the given streams only.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linking

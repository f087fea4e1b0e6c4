#pragma once

#include <iosfwd>

namespace photonstats {

// Exit codes: 0 success, 1 input/data failure, 2 strict non-convergence,
// 64 unknown command or flag (usage goes to err).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace photonstats

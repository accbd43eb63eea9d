#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace provcausal::cli {

// dispatches one invocation. args excludes the program name. exit code 0
// on success or a passing verdict, 1 on a failing verdict, 2 on usage,
// parse or refusal errors (message on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace provcausal::cli

#pragma once

#include <string>
#include <vector>

namespace prbox {

// Exit codes: 0 all checks passed, 1 a check failed, 2 usage error.
int run_cli(int argc, const char* const* argv);

// Convenience for tests; args exclude the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace prbox

#pragma once
// Command-line pipeline orchestration. Exposed as a library call so
// integration tests can drive the exact production code path.
//
// Exit codes: 0 ok, 2 configuration error, 3 data error.

#include <string>
#include <vector>

namespace hopadv {

int run_command(const std::vector<std::string>& args);

}  // namespace hopadv

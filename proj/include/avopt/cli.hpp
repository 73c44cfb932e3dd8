#pragma once

#include <string>
#include <vector>

namespace avopt {

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 invalid
// scenario or plan document, 3 infeasible or node-limit outcome, 4
// validation or agreement failures.
int run_cli(const std::vector<std::string>& args);

}  // namespace avopt

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gtmp {

// Entry point of the gtmp executable. args excludes the program name.
// Exit codes: 0 found / member / solved / verified, 1 usage or parse error,
// 2 infeasible / not in closure / verification failed, 3 closure measure
// only, 4 undetermined.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gtmp

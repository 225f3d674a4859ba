#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symcol {

// Exit codes: 0 no attack / unsat, 1 attack / derivable / sat, 2 unknown,
// 3 input error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace symcol

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prony::cli {

// Exit status: 0 success, 1 usage or input error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace prony::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace srg::cli {

// Runs one command line (without the program name). Returns the exit code:
// 0 success, 1 validation error or bad usage, 2 I/O error.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}

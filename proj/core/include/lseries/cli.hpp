#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lseries::cli {

/// Parses and runs one command line. Exit codes: 0 success, 1 internal error,
/// 2 hypothesis failure or failed verification, 64 malformed input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_main(int argc, char** argv);

}  // namespace lseries::cli

#include "lseries/cli.hpp"

int main(int argc, char** argv) { return lseries::cli::run_main(argc, argv); }

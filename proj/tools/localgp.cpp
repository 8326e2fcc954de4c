#include "localgp/cli/config.hpp"

int main(int argc, char** argv) { return localgp::cli::run_cli(argc, argv); }

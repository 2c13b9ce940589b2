#include "prony_cli/cli.hpp"

int main(int argc, char** argv) { return prony::cli::cli_main(argc, argv); }

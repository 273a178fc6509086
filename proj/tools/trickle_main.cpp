#include <iostream>

#include "trickle/cli/commands.hpp"

int main(int argc, char** argv) { return trickle::cli::run_cli(argc, argv, std::cout, std::cerr); }

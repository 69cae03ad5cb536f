#include <iostream>

#include "amass/cli.hpp"

int main(int argc, char** argv) { return amass::cli::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "oirs/cli/commands.hpp"

int main(int argc, char** argv) { return oirs::cli::main(argc, argv, std::cout, std::cerr); }

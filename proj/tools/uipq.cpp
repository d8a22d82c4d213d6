#include "uipq/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return uipq::cli::main_entry(argc, argv, std::cout, std::cerr); }

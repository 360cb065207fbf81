#include <iostream>

#include "bootlex/cli.hpp"

int main(int argc, char** argv) { return bootlex::cli::main(argc, argv, std::cout, std::cerr); }

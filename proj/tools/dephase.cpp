// dephase.cpp: Command-line entry point

#include <iostream>

#include "dephasing/cli.hpp"

int main(int argc, char** argv) { return dephasing::cli::run(argc, argv, std::cout, std::cerr); }

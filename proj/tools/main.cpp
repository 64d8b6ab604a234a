#include <iostream>

#include "hologen/cli.hpp"

int main(int argc, char** argv) { return hologen::cli::run(argc, argv, std::cout, std::cerr); }

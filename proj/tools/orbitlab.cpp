#include <iostream>

#include "orbitlab/cli/run.hpp"

int main(int argc, char** argv) { return orbitlab::cli::run(argc, argv, std::cout, std::cerr); }

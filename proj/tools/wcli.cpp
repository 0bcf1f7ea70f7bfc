#include "brstkit/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return brstkit::cli::run(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "monocurv/cli.hpp"

int main(int argc, char** argv) { return monocurv::cli::run(argc, argv, std::cout, std::cerr); }

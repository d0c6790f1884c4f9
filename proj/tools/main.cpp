#include "lids/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lids::cli::run(argc, argv, std::cout, std::cerr); }

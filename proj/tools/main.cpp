#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return nbcf::cli::run(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "eplt/cli.hpp"

int main(int argc, char** argv) { return eplt::cli::run(argc, argv, std::cout, std::cerr); }

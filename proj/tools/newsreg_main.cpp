#include <iostream>

#include "newsreg/cli.hpp"

int main(int argc, char** argv) { return newsreg::cli::run(argc, argv, std::cout, std::cerr); }

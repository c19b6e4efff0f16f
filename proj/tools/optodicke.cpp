#include <iostream>

#include "optodicke/cli.hpp"

int main(int argc, char** argv) { return optodicke::cli::run(argc, argv, std::cout, std::cerr); }

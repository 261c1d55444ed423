#include <iostream>

#include "psdsparse/cli.hpp"

int main(int argc, char** argv) { return psdsparse::cli_main(argc, argv, std::cout, std::cerr); }

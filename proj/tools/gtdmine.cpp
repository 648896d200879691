#include <iostream>

#include "gtdmine/cli.hpp"

int main(int argc, char** argv) { return gtdmine::cli_main(argc, argv, std::cout, std::cerr); }

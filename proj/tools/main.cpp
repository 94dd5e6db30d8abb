#include <iostream>

#include "hetsched/cli.hpp"

int main(int argc, char** argv) { return hetsched::cli_main(argc, argv, std::cout, std::cerr); }

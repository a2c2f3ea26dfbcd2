#include <iostream>

#include "realdyn/cli.hpp"

int main(int argc, char** argv) { return realdyn::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "popdyn/cli.hpp"

int main(int argc, char** argv) { return popdyn::run_cli(argc, argv, std::cout, std::cerr); }

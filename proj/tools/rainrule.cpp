#include <iostream>

#include "rainrule/cli.hpp"

int main(int argc, char** argv) { return rainrule::run_cli(argc, argv, std::cout, std::cerr); }

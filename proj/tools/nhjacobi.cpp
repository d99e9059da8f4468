#include <iostream>

#include "nhjacobi/cli.hpp"

int main(int argc, char** argv) { return nhj::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "twq/cli.hpp"

int main(int argc, char** argv) { return twq::run_cli(argc, argv, std::cout, std::cerr); }

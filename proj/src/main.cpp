#include <iostream>

#include "photonstats/cli.hpp"

int main(int argc, char** argv) { return photonstats::run_cli(argc, argv, std::cout, std::cerr); }

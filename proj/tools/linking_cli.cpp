#include "linking/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return linking::run_cli(argc, argv, std::cout, std::cerr); }

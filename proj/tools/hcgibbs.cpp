#include <iostream>

#include "hcgibbs/cli.hpp"

int main(int argc, char** argv) { return hcgibbs::run_cli(argc, argv, std::cout, std::cerr); }

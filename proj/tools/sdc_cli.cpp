#include <iostream>

#include "sdc/cli.hpp"

int main(int argc, char** argv) { return sdc::run_cli(argc, argv, std::cout, std::cerr); }

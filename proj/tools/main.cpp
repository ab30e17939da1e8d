#include <iostream>

#include "fairvrp/cli.hpp"

int main(int argc, char** argv) { return fvrp::run(argc, argv, std::cout, std::cerr); }

#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return maxent::cli::run(argc, argv, std::cout, std::cerr); }

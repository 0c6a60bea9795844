#include <iostream>

#include "cantorgap/tools/commands.hpp"

int main(int argc, char** argv) { return cantorgap::tools::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "bbmsf/cli.hpp"

int main(int argc, char** argv) { return bbmsf::run_command(argc, argv, std::cout, std::cerr); }

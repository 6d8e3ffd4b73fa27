#include <iostream>

#include "framelift/cli.hpp"

int main(int argc, char** argv) { return framelift::cli::run(argc, argv, std::cout, std::cerr); }

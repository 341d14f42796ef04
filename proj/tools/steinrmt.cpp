#include <iostream>

#include "steinrmt/cli.hpp"

int main(int argc, char** argv) { return steinrmt::cli_main(argc, argv, std::cout, std::cerr); }

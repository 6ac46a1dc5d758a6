#include <iostream>

#include "helssvr/cli/commands.hpp"

int main(int argc, char** argv) { return helssvr::cli::run(argc, argv, std::cout, std::cerr); }

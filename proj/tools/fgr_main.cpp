#include <iostream>

#include "fgr/cli.hpp"

int main(int argc, char** argv) { return fgr::cli::run(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return treespectra::cli::main_with_args(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "freeevt/cli.hpp"

int main(int argc, char** argv) { return freeevt::cli::main_entry(argc, argv, std::cout, std::cerr); }

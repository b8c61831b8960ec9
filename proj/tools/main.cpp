#include <iostream>

#include "fracdyn/cli/run.hpp"

int main(int argc, char** argv) { return fracdyn::cli::main_entry(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "rabi_cli/run.hpp"

int main(int argc, char** argv) { return rabi::cli::run(argc, argv, std::cout, std::cerr); }

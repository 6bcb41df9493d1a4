#include <iostream>

#include "cgprof/cli.hpp"

int main(int argc, char** argv) { return cgprof::cli::main(argc, argv, std::cout, std::cerr); }

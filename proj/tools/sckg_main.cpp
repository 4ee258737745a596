#include <iostream>

#include "sckg/pipeline.hpp"

int main(int argc, char** argv) { return sckg::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "gencalc/cli.hpp"

int main(int argc, char** argv) { return gencalc::run(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "gupdirac/cli.hpp"

int main(int argc, char** argv) { return gupdirac::run(argc, argv, std::cout, std::cerr); }

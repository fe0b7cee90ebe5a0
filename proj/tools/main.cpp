#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return et14::cli::run(argc, argv, std::cout, std::cerr); }

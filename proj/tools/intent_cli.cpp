#include <iostream>

#include "intent/cli.hpp"

int main(int argc, char** argv) { return intent::cli::run(argc, argv, std::cout, std::cerr); }

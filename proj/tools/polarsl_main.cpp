#include <iostream>

#include "polarsl/cli.hpp"

int main(int argc, char** argv) { return polarsl::cli::run(argc, argv, std::cout, std::cerr); }

#include "johnell/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return johnell::cli::run(argc, argv, std::cout, std::cerr);
}

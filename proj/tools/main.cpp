#include <iostream>

#include "bft/cli.hpp"

int main(int argc, char** argv) {
  return bft::cli::run(argc, argv, std::cout, std::cerr);
}

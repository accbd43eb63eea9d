#include <iostream>

#include "provcausal/cli.hpp"

int main(int argc, char** argv) {
  return provcausal::cli::run(argc, argv, std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "volclust/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return volclust::cli::run(args, std::cout, std::cerr);
}

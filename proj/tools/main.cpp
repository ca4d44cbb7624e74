#include <iostream>
#include <string>
#include <vector>

#include "stochlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stochlab::cli::dispatch(args, std::cout, std::cerr);
}

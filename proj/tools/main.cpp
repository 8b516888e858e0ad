#include <iostream>
#include <string>
#include <vector>

#include "flakelab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return flakelab::run_cli(args, std::cout, std::cerr);
}

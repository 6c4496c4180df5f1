#include <iostream>
#include <string>
#include <vector>

#include "giweyl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return giweyl::run_cli(args, std::cout, std::cerr);
}

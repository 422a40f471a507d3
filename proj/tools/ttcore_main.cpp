#include <iostream>
#include <string>
#include <vector>

#include "ttcore/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ttcore::run_cli(args, std::cout, std::cerr);
}

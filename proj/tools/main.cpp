#include <iostream>
#include <string>
#include <vector>

#include "tvrobust/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tvrobust::run_cli(args, std::cout, std::cerr);
}

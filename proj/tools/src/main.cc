#include <iostream>
#include <string>
#include <vector>

#include "optcon_cli/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return optcon::cli::Main(args, std::cout, std::cerr);
}

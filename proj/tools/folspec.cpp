#include <iostream>
#include <string>
#include <vector>

#include "folspec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return folspec::cli::run(args, std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "mdr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mdr::cli::run(args, std::cout, std::cerr);
}

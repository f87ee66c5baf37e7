#include <iostream>
#include <string>
#include <vector>

#include "gnar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gnar::cli::run(args, std::cout, std::cerr);
}

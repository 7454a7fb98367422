#include <iostream>

#include "polygrowth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return polygrowth::run_cli(args, std::cout, std::cerr);
}

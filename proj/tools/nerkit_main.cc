#include <iostream>
#include <string>
#include <vector>

#include "nerkit/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return nerkit::run_cli(args, std::cout, std::cerr);
}

#include <iostream>

#include "ltpal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ltpal::run_cli(args, std::cout, std::cerr);
}

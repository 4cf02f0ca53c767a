#include <iostream>

#include "parastep/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return parastep::run_cli(args, std::cout, std::cerr);
}

#include <iostream>
#include <string>
#include <vector>

#include "gr1kit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gr1kit::cli::run_cli(args, std::cin, std::cout, std::cerr);
}

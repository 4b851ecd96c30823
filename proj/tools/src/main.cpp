#include <iostream>
#include <string>
#include <vector>

#include "unroll_cli/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return unroll::cli::run_cli(args, std::cout, std::cerr);
}

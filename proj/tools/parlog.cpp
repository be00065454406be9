// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "parlog/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  parlog::CommandResult res = parlog::run_command(args);
  std::cout << res.out;
  std::cerr << res.err;
  return res.exit_code;
}

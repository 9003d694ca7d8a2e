// Copyright 2026 The cachenet Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "cachenet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cachenet::cli::run(args, std::cout, std::cerr, std::cin);
}

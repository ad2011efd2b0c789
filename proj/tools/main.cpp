// Copyright 2026 The prtvol Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "cli.h"

int main(int argc, char** argv) {
  return prtvol::cli::dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

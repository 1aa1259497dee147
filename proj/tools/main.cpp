// Copyright 2026 The Sentinel Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include <sentinel/cli.hpp>

int main(int argc, char* argv[]) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sentinel::cli::run_command(args, std::cout, std::cerr);
}

// SPDX-License-Identifier: Apache-2.0
#include "cuntzwave/cli.hpp"

int main(int argc, char** argv) { return cuntzwave::cli::run(argc, argv); }

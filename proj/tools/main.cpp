#include <unistd.h>

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  holx::cli::Options options;
  options.color = holx::cli::color_from_environment(isatty(STDOUT_FILENO) == 1);
  return holx::cli::run(args, std::cout, std::cerr, options);
}

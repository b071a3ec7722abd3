#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace holx::cli {

// Exit statuses of the holx tool.
enum Exit : int {
  kOk = 0,
  kNegative = 1,  // domain verdict negative: violations, not interoperable, run rolled back
  kInputError = 2,
  kInternalError = 3,
};

struct Options {
  bool color = false;  // ANSI styling of plain-text reports
};

// Runs one holx command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Options& options = {});

// HOLX_COLOR=never disables styling; auto (default) styles terminals only.
bool color_from_environment(bool stdout_is_terminal);

}  // namespace holx::cli

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace chaplie::app {

enum ExitCode : int { ok = 0, criterion_fail = 1, input_error = 2, numerical_error = 3, inconclusive = 4 };

enum class Format { json, csv };

struct CommandOutput {
  int code = ok;
  Json report;
  std::string csv;  // payload for --format csv
  /// Extra files for --out-dir, as (file name, contents).
  std::vector<std::pair<std::string, std::string>> files;
};

CommandOutput cmd_roots(const std::string& id, std::uint64_t seed, bool bases);
CommandOutput cmd_simulate(const RunConfig& cfg);
CommandOutput cmd_check_ham(const RunConfig& cfg);
CommandOutput cmd_verify(const RunConfig& cfg);
CommandOutput cmd_oracle(const RunConfig& cfg);

/// Full command line (without the program name). Reports go to `out`,
/// diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chaplie::app

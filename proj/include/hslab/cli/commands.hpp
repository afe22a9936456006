#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hslab/cli/config.hpp"
#include "hslab/errors.hpp"

namespace hslab::cli {

struct RunReport {
  json report;
  // (file name, CSV text) in emission order
  std::vector<std::pair<std::string, std::string>> tables;
  bool pass = true;
};

const std::vector<std::string>& command_names();

// Dispatches one of command_names(). Module errors propagate unchanged.
RunReport run_command(const std::string& cmd, const ProblemConfig& config);

// report.json plus one CSV per table, created under out_dir.
void write_outputs(const RunReport& run, const std::string& out_dir);

// 0 ok, 2 config, 3 numeric, 4 verification.
int exit_code(ErrorKind kind);

}  // namespace hslab::cli

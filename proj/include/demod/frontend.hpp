#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "demod/cutfree.hpp"

namespace demod {

struct CommandResult {
  int exit_code = 0;
  std::string text;
  nlohmann::json report;
};

// Runs one CLI command (argv without the program name). Exit codes:
// 0 = success, 1 = logical failure (rejection, missing proof or model,
// counterexample), 2 = usage or parse error.
CommandResult run_command(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

// Report serialization helpers shared by the CLI and the bindings.
nlohmann::json model_to_json(const Model& M);
nlohmann::json law_report_to_json(const LawReport& rep);
nlohmann::json rejection_to_json(const Rejection& r);

std::string read_file(const std::string& path);

}  // namespace demod

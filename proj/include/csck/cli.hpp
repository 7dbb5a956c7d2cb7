#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace csck::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kChecksFailed = 1, kNumerical = 2, kValidation = 3 };

struct RunConfig {
  std::string command;
  std::filesystem::path config_path;  // empty: command defaults
  std::filesystem::path output_dir;   // empty: default_output_dir(command)
  std::uint64_t seed = 0;
  unsigned jobs = 0;  // 0: hardware concurrency
  bool quiet = false;
};

struct RunOutcome {
  int exit_code = kOk;
  nlohmann::json report;
  std::filesystem::path output_dir;
};

const std::vector<std::string>& commands();

/// $CSCK_LAB_OUT/<command>, or ./csck_lab_out/<command> when unset.
std::filesystem::path default_output_dir(const std::string& command);

/// Runs one subcommand and writes report.json, the command's CSV files and log.txt.
/// Module errors are caught and mapped to exit codes; the report records them.
RunOutcome run(const RunConfig& config);

}  // namespace csck::cli

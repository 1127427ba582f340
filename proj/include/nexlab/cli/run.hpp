#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nexlab/cli/config.hpp"
#include "nexlab/core/error.hpp"

namespace nexlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitChecksFailed = 1;

/// Distinct nonzero status per error kind.
int exit_code_for(ErrorKind kind);

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  std::string summary;
};

/// Runs one task and writes its artifacts under config.out_dir. Throws
/// nexlab::Error subclasses.
RunOutcome run(const ExperimentConfig& config);

/// Command-line entry: <task> (--config <path> | --preset <name>) [--set k=v ...] --out <dir>.
int main_entry(int argc, char** argv);

}  // namespace nexlab::cli

#pragma once

#include <optional>
#include <string>

#include "coexist/problem_spec.hpp"
#include "coexist/report.hpp"

namespace coexist {

inline constexpr const char* kToolName = "coexist";
inline constexpr const char* kToolVersion = "0.1.0";

struct CliOptions {
  std::string command;  // constants certify solve index asymptotics report
  std::string spec_path;
  std::string out_dir = ".";
  int grid_override = 0;  // 0 keeps the spec's grid
  std::optional<uint64_t> seed_override;
  bool svg = false;
};

// Exit codes: 0 pass / converged, 1 unusable spec or flags, 2 certified
// fail, 3 numerical failure.  A run report is written whenever the spec
// itself loads.
int run_command(const CliOptions& opt);

// Argument parsing wrapper around run_command.
int run_cli(int argc, const char* const* argv);

}  // namespace coexist

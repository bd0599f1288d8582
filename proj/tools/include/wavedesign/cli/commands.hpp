#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "wavedesign/cli/config.hpp"

namespace wavedesign::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kIoError = 3 };

struct CommandContext {
  json config;
  /// Directory that relative paths inside the config resolve against.
  std::filesystem::path base_dir;
  OutputOptions output;
  std::optional<std::uint64_t> seed;
};

using Written = std::vector<std::filesystem::path>;

Written cmd_synth(const CommandContext& ctx);
Written cmd_analyze(const CommandContext& ctx);
Written cmd_optimize(const CommandContext& ctx);
Written cmd_simulate(const CommandContext& ctx);
Written cmd_compare(const CommandContext& ctx);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace wavedesign::cli

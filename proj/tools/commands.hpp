#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sigmak::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

struct Overrides {
  std::string config_path;
  std::string out_dir = "sigmak_out";
  std::optional<std::uint64_t> seed;
  std::optional<int> n, k;
  // Per-command settings.
  std::optional<int> J;
  std::optional<double> h;
  std::optional<std::string> source;
  std::vector<int> only;
};

// Runs one command and returns the process exit code. Diagnostics go to stderr
// and, for numeric failures, to diagnostic.json in the output directory.
int run(const std::string& command, const Overrides& o);

}  // namespace sigmak::cli

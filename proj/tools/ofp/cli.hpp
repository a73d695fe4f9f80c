#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ofp/autodiff.hpp"

namespace ofp::cli {

enum ExitCode : int { kOk = 0, kGateFailure = 1, kUsage = 2 };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::string> manifest;
  bool builtin_corpus = false;

  double theta_atomic = 1e5;
  double theta_func = 1e5;
  double probe_offset = 1e-5;
  /// Overrides per-target radii when set.
  std::optional<double> radius;
  std::size_t samples = 1000;
  std::size_t budget = 4096;
  std::size_t node_cap = kDefaultNodeCap;
  long precision_bits = 256;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::optional<double> ceiling;

  /// Forced expansion: variable name and full point.
  std::optional<std::string> var;
  std::optional<std::vector<double>> at;

  std::optional<std::string> out;
  std::optional<std::string> csv;
  std::string patch_dir = "patches";
};

/// Parses arguments and runs one subcommand. Reports go to `out` unless
/// --out names a file; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ofp::cli

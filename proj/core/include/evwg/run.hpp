#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evwg/config.hpp"

namespace evwg {

/// Failure inside a mode; what() starts with the module operation that threw,
/// e.g. "resonance_analysis.find_fixed_points: ...".
class RunError : public std::runtime_error {
 public:
  RunError(std::string op, const std::string& detail)
      : std::runtime_error(op + ": " + detail), op_(std::move(op)) {}
  const std::string& op() const noexcept { return op_; }

 private:
  std::string op_;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config
  std::optional<int> threads;         // overrides the config
};

struct OutputFile {
  std::filesystem::path path;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunResult {
  Mode mode{};
  std::vector<OutputFile> outputs;
  std::string summary;  // one line: mode, key numbers, every output with digest
};

RunResult run(const RunConfig& cfg, Mode mode, const RunOptions& options = {});

}  // namespace evwg

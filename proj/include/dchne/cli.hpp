#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dchne/metrics_io.hpp"
#include "dchne/simulator.hpp"

namespace dchne::cli {

enum class Subcommand { kRun, kCompare, kSweep };

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

struct CliInvocation {
  Subcommand subcommand = Subcommand::kRun;
  // Defaults, then --config, then flags.
  SimConfig base;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::size_t> node_counts;  // sweep only
  std::optional<std::filesystem::path> out;
  Format format = Format::kCsv;
  int threads = 0;  // 0: OpenMP default
  bool help = false;
  std::string help_text;
};

// "a..b" (inclusive) or a single integer.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);
// "a..b:step" or "a..b" (step 10).
std::vector<std::size_t> parse_node_range(const std::string& text);

// args excludes the program name. Throws UsageError naming the offending flag.
CliInvocation parse_args(const std::vector<std::string>& args);

// Every simulation the invocation will execute, in output order:
// run -> 1; compare -> policies x seeds; sweep -> node counts x seeds.
std::vector<SimConfig> plan_runs(const CliInvocation& inv);

// Runs the plan and writes exports. Returns an ExitCode.
int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err);

// parse_args + execute with exit-code mapping.
int main(int argc, char** argv);

}  // namespace dchne::cli

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ladder/artifacts.hpp"
#include "ladder/pipeline.hpp"
#include "ladder/workload.hpp"

namespace ladder {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitStageFailure = 2,
  kExitBudgetOverflow = 3,
};

// Per-stage seeds are master + offset.
inline constexpr std::uint64_t kGeneratorSeedOffset = 0;
inline constexpr std::uint64_t kMapperSeedOffset = 1;

struct RunConfig {
  // Exactly one workload source.
  std::optional<std::string> workload_file;
  std::optional<SynthesisParams> generator;
  // Identifier written into reports; defaults to the file stem or "synthetic".
  std::string name;

  std::optional<int> tiles;
  std::optional<int> lanes;
  MapperConfig mapper;
  int spike_cycles = 1;
  SimConfig sim;
  std::vector<Variant> variants{kAllVariants.begin(), kAllVariants.end()};
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

// Mirrors RunConfig:
// {"workload": {"file": path} | {"generate": {"clusters", "degree", "burstiness",
//  "steps", "max_spikes"}}, "name", "tiles", "lanes",
//  "mapper": {"restarts", "iterations"}, "spike_cycles", "sim": {...},
//  "variants": ["sl", ...], "output_dir", "seed"}
RunConfig parse_run_config(const nlohmann::json& j);

// Tile count actually used: the request, or the cluster count; rounded up to
// the next even number no smaller than the cluster count.
int resolve_tiles(std::optional<int> requested, int clusters);
int resolve_lanes(std::optional<int> requested, int clusters);

// Runs every configured variant and writes stage artifacts plus summary.csv
// under output_dir. Throws on failure, with the stage named in the message.
void run_configured_pipeline(const RunConfig& config);

// Side-by-side CSV with every metric divided by the baseline report's. The
// baseline is the report whose variant equals `baseline`; when `baseline` is
// empty, "sl" is preferred and the first report is the fallback.
std::string compare_reports(std::span<const ReportFile> reports, const std::string& baseline);

// Entry point for the ladderbus tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace ladder

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ladder/mapper.hpp"
#include "ladder/router.hpp"
#include "ladder/scheduler.hpp"
#include "ladder/simulator.hpp"
#include "ladder/topology.hpp"

namespace ladder {

// All writers emit two-space-indented JSON with a trailing newline; readers
// throw InputError on schema violations.

// {"tiles": [...], "switches": [[lane, col], ...], "edges": [[a, b], ...]}
nlohmann::json topology_to_json(const LadderTopology& topo);

struct MappingFile {
  Mapping mapping;
  double cost = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  // Topology the mapping was computed for, when recorded.
  std::optional<int> tiles;
  std::optional<int> lanes;
};

// {"mapping": {"<cluster>": tile, ...}, "cost", "alpha", "beta", "tiles", "lanes"}
std::string write_mapping(const MappingFile& file);
MappingFile read_mapping(std::string_view text);

// {"spike_cycles", "steps": [{"t", "groups": [{"offset", "links": [{"src", "dst", "spikes"}]}]}]}
std::string write_schedule(const Schedule& schedule);
Schedule read_schedule(std::string_view text);

// {"steps": [{"t", "groups": [{"offset", "routes": [{"src", "dst", "path": [node, ...]}]}]}]}
std::string write_routes(const RouteTable& routes);
RouteTable read_routes(std::string_view text);

// {"spike_cycles", "energy_per_segment", "energy_per_switch_config", "cycles_per_time_step"};
// absent fields keep their defaults.
SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json sim_config_to_json(const SimConfig& config);

struct ReportFile {
  std::string workload;
  std::string variant;
  SimReport report;
};

std::string write_report(const ReportFile& file);
ReportFile read_report(std::string_view text);

inline constexpr std::string_view kReportCsvHeader =
    "workload,variant,offered,delivered,dropped,received_ratio,avg_latency,energy,"
    "energy_per_spike,edp";
std::string report_csv_row(const ReportFile& file);

// Shortest round-trip rendering used for every real in CSV output.
std::string format_real(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace ladder

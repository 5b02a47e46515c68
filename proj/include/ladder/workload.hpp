#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ladder {

using ClusterId = std::int32_t;

// Directed link between clusters with its spike total over the whole trace.
struct ClusterLink {
  ClusterId src = 0;
  ClusterId dst = 0;
  std::int64_t spikes = 0;

  friend bool operator==(const ClusterLink&, const ClusterLink&) = default;
};

// Aggregated communication graph. Links are sorted by (src, dst) and unique.
struct ClusterGraph {
  int cluster_count = 0;
  std::vector<ClusterLink> links;

  friend bool operator==(const ClusterGraph&, const ClusterGraph&) = default;
};

struct SpikeEvent {
  std::int64_t t = 0;
  ClusterId src = 0;
  ClusterId dst = 0;
  std::int64_t spikes = 0;

  friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

// Events sorted by (t, src, dst), at most one per key.
struct SpikeTrace {
  std::vector<SpikeEvent> events;

  // Consecutive runs of events sharing a time step.
  std::vector<std::span<const SpikeEvent>> steps() const;

  friend bool operator==(const SpikeTrace&, const SpikeTrace&) = default;
};

struct Workload {
  ClusterGraph graph;
  SpikeTrace trace;

  friend bool operator==(const Workload&, const Workload&) = default;
};

struct WorkloadStats {
  int cluster_count = 0;
  int link_count = 0;
  double avg_degree = 0.0;
  double density = 0.0;
  int suggested_lanes = 0;
};

// Validates events, sorts them, and aggregates the cluster graph.
// Throws InputError on self-links, out-of-range ids, duplicate (t, src, dst)
// keys, negative time steps, or non-positive spike counts.
Workload make_workload(int cluster_count, std::vector<SpikeEvent> events);

// {"clusters": int, "events": [{"t", "src", "dst", "spikes"}, ...]}
Workload parse_workload(std::string_view json_text);
std::string serialize_workload(const Workload& workload);

// Smallest k with k * k >= n.
int ceil_sqrt(int n);

WorkloadStats stats(const ClusterGraph& graph);
std::string stats_csv(std::span<const WorkloadStats> rows, std::span<const std::string> names);

struct SynthesisParams {
  int cluster_count = 12;
  double avg_degree = 1.5;
  // Fraction of links firing together in each time step.
  double burstiness = 0.3;
  int time_steps = 100;
  std::uint64_t seed = 0;
  // Per-event spikes are drawn uniformly from [1, max_spikes].
  int max_spikes = 8;
};

// Random directed graph with round(avg_degree * clusters) links plus a trace in
// which every link fires at least once.
Workload synthesize(const SynthesisParams& params);

}  // namespace ladder

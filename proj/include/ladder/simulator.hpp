#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ladder/mapper.hpp"
#include "ladder/router.hpp"
#include "ladder/scheduler.hpp"
#include "ladder/topology.hpp"
#include "ladder/workload.hpp"

namespace ladder {

struct SimConfig {
  int spike_cycles = 1;
  // Normalized energy units.
  double energy_per_segment = 1.0;
  double energy_per_switch_config = 0.0;
  std::int64_t cycles_per_time_step = 1'000'000;

  void validate() const;
};

struct StepReport {
  std::int64_t t = 0;
  std::int64_t offered = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  std::int64_t makespan = 0;
  double energy = 0.0;

  friend bool operator==(const StepReport&, const StepReport&) = default;
};

struct SimReport {
  std::int64_t spikes_offered = 0;
  std::int64_t spikes_delivered = 0;
  std::int64_t spikes_dropped = 0;
  // 1 when nothing was offered.
  double spike_received_ratio = 1.0;
  // 0 when nothing was delivered.
  double avg_latency_cycles = 0.0;
  double total_dynamic_energy = 0.0;
  // Empty when nothing was delivered.
  std::optional<double> energy_per_spike;
  double edp = 0.0;
  // Raw counters behind the energy figure.
  std::int64_t segment_traversals = 0;
  std::int64_t switch_reconfigurations = 0;
  std::vector<StepReport> steps;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

// Replays the trace on the bufferless bus. Each link holds every edge of its
// path for spikes * N cycles from its group's offset; a link that finds any
// edge already held for an overlapping interval loses all its spikes for the
// step. Throws StageError when the artifacts do not cover the trace and
// BudgetOverflow when a step's schedule exceeds cycles_per_time_step.
SimReport simulate(const LadderTopology& topo, const SpikeTrace& trace, const Mapping& mapping,
                   const Schedule& schedule, const RouteTable& routes, const SimConfig& config);

}  // namespace ladder

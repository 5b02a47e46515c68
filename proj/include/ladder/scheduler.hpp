#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ladder/mapper.hpp"
#include "ladder/topology.hpp"
#include "ladder/workload.hpp"

namespace ladder {

enum class CrossingMode { Topological, ShortestPath };

struct SchedulerConfig {
  CrossingMode mode = CrossingMode::Topological;
  // Cycles needed to serialize one spike.
  int spike_cycles = 1;

  void validate() const;
};

// A link after mapping, carrying one time step's spike count.
struct ScheduledLink {
  LinkEndpoints link;
  std::int64_t spikes = 0;

  friend bool operator==(const ScheduledLink&, const ScheduledLink&) = default;
};

struct Group {
  std::int64_t cycle_offset = 0;
  std::vector<ScheduledLink> links;

  std::int64_t max_spikes() const;

  friend bool operator==(const Group&, const Group&) = default;
};

struct StepSchedule {
  std::int64_t t = 0;
  std::vector<Group> groups;

  friend bool operator==(const StepSchedule&, const StepSchedule&) = default;
};

struct Schedule {
  int spike_cycles = 1;
  std::vector<StepSchedule> steps;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Decides whether two mapped links may share a group. ShortestPath mode caches
// each link's canonical shortest path.
class ConflictChecker {
public:
  ConflictChecker(const LadderTopology& topo, CrossingMode mode) : topo_(topo), mode_(mode) {}

  bool conflict(LinkEndpoints p, LinkEndpoints q);
  const NodePath& path(LinkEndpoints link);

private:
  const LadderTopology& topo_;
  CrossingMode mode_;
  struct Cached {
    NodePath path;
    std::vector<std::int32_t> sorted_nodes;
  };
  const Cached& lookup(LinkEndpoints link);

  std::map<LinkEndpoints, Cached> cache_;
};

// Descending spikes, then ascending (src, dst).
void sort_by_spikes(std::vector<ScheduledLink>& links);

// Maps one step's events onto tiles (in trace order).
std::vector<ScheduledLink> map_step(std::span<const SpikeEvent> events, const Mapping& mapping,
                                    const LadderTopology& topo);

// First-fit grouping of one time step's links, offsets included.
std::vector<Group> group_links(std::vector<ScheduledLink> links, const LadderTopology& topo,
                               const SchedulerConfig& config);

// Rewrites every group's offset as the running sum of earlier max_spikes * N.
void assign_offsets(std::vector<Group>& groups, int spike_cycles);

Schedule schedule(const SpikeTrace& trace, const Mapping& mapping, const LadderTopology& topo,
                  const SchedulerConfig& config);

// No scheduling: every step's links form a single group at offset 0, in
// descending-spike order.
Schedule unscheduled(const SpikeTrace& trace, const Mapping& mapping, const LadderTopology& topo,
                     int spike_cycles);

inline constexpr std::size_t kOracleMaxLinks = 12;

// Exact minimum number of conflict-free, lane-feasible groups.
int min_groups_oracle(std::span<const ScheduledLink> links, const LadderTopology& topo,
                      const SchedulerConfig& config);

// Pairwise conflict-free under the mode and lane-feasible.
bool group_is_sound(std::span<const ScheduledLink> links, const LadderTopology& topo,
                    CrossingMode mode);

std::int64_t step_makespan(const StepSchedule& step, int spike_cycles);
std::int64_t schedule_makespan(const Schedule& schedule);

}  // namespace ladder

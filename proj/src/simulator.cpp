#include "ladder/simulator.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "ladder/errors.hpp"

namespace ladder {

void SimConfig::validate() const {
  if (spike_cycles < 1) throw InputError("spike_cycles must be >= 1");
  if (!(energy_per_segment >= 0.0) || !(energy_per_switch_config >= 0.0)) {
    throw InputError("energy parameters must be non-negative");
  }
  if (cycles_per_time_step < 1) throw InputError("cycles_per_time_step must be >= 1");
}

namespace {

using LinkKey = std::tuple<TileId, TileId, std::int64_t>;

void check_coverage(const LadderTopology& topo, const SpikeTrace& trace, const Mapping& mapping,
                    const Schedule& schedule, const RouteTable& routes) {
  const auto trace_steps = trace.steps();
  if (trace_steps.size() != schedule.steps.size()) {
    throw StageError(fmt::format("schedule has {} steps, trace has {}", schedule.steps.size(),
                                 trace_steps.size()));
  }
  if (routes.steps.size() != schedule.steps.size()) {
    throw StageError("route table and schedule disagree on step count");
  }
  for (std::size_t s = 0; s < trace_steps.size(); ++s) {
    const StepSchedule& step = schedule.steps[s];
    const RoutedStep& rstep = routes.steps[s];
    if (step.t != trace_steps[s].front().t || rstep.t != step.t) {
      throw StageError(fmt::format("step {} of the schedule is t={}, trace expects t={}", s,
                                   step.t, trace_steps[s].front().t));
    }
    std::vector<LinkKey> expected;
    for (const SpikeEvent& e : trace_steps[s]) {
      const LinkEndpoints ends = mapping.endpoints(e.src, e.dst);
      expected.emplace_back(ends.src, ends.dst, e.spikes);
    }
    std::vector<LinkKey> scheduled;
    if (rstep.groups.size() != step.groups.size()) {
      throw StageError(fmt::format("t={}: route table and schedule disagree on groups", step.t));
    }
    for (std::size_t g = 0; g < step.groups.size(); ++g) {
      const Group& group = step.groups[g];
      const RoutedGroup& rgroup = rstep.groups[g];
      if (rgroup.routes.size() != group.links.size() || rgroup.cycle_offset != group.cycle_offset) {
        throw StageError(fmt::format("t={} group {}: routes do not match the schedule", step.t, g));
      }
      for (std::size_t k = 0; k < group.links.size(); ++k) {
        const ScheduledLink& l = group.links[k];
        const Route& r = rgroup.routes[k];
        if (r.link != l.link) {
          throw StageError(fmt::format("t={} group {}: route {} is for T{}->T{}, schedule has "
                                       "T{}->T{}",
                                       step.t, g, k, r.link.src, r.link.dst, l.link.src,
                                       l.link.dst));
        }
        try {
          topo.validate_path(r.path);
        } catch (const InputError& e) {
          throw StageError(fmt::format("t={} T{}->T{}: {}", step.t, l.link.src, l.link.dst,
                                       e.what()));
        }
        if (r.path.front() != topo.tile_node(l.link.src) ||
            r.path.back() != topo.tile_node(l.link.dst)) {
          throw StageError(fmt::format("t={}: path endpoints do not match T{}->T{}", step.t,
                                       l.link.src, l.link.dst));
        }
        scheduled.emplace_back(l.link.src, l.link.dst, l.spikes);
      }
    }
    std::sort(expected.begin(), expected.end());
    std::sort(scheduled.begin(), scheduled.end());
    if (expected != scheduled) {
      throw StageError(fmt::format("t={}: scheduled links do not match the trace", step.t));
    }
  }
}

struct Interval {
  std::int64_t begin;
  std::int64_t end;  // exclusive
};

}  // namespace

SimReport simulate(const LadderTopology& topo, const SpikeTrace& trace, const Mapping& mapping,
                   const Schedule& schedule, const RouteTable& routes, const SimConfig& config) {
  config.validate();
  if (schedule.spike_cycles != config.spike_cycles) {
    throw StageError(fmt::format("schedule uses N={} but the simulator is configured for N={}",
                                 schedule.spike_cycles, config.spike_cycles));
  }
  check_coverage(topo, trace, mapping, schedule, routes);

  std::vector<std::int64_t> overflow;
  for (const StepSchedule& step : schedule.steps) {
    if (step_makespan(step, config.spike_cycles) > config.cycles_per_time_step) {
      overflow.push_back(step.t);
    }
  }
  if (!overflow.empty()) {
    throw BudgetOverflow(fmt::format("{} time step(s) exceed the budget of {} cycles (first t={})",
                                     overflow.size(), config.cycles_per_time_step,
                                     overflow.front()),
                         overflow);
  }

  const std::int64_t n = config.spike_cycles;
  const double e_seg = config.energy_per_segment;
  const double e_sw = config.energy_per_switch_config;

  SimReport report;
  std::int64_t latency_sum = 0;
  // Current through-connection of each node, as an edge-index pair; -1 if unset.
  std::vector<std::pair<int, int>> switch_state(static_cast<std::size_t>(topo.node_count()),
                                                {-1, -1});
  std::vector<std::vector<Interval>> held(topo.edges().size());
  std::vector<int> touched;
  std::vector<int> edge_ids;

  for (std::size_t s = 0; s < routes.steps.size(); ++s) {
    const RoutedStep& rstep = routes.steps[s];
    const StepSchedule& step = schedule.steps[s];
    StepReport sr;
    sr.t = rstep.t;
    std::int64_t step_hops = 0;
    std::int64_t step_switches = 0;

    for (std::size_t g = 0; g < rstep.groups.size(); ++g) {
      const RoutedGroup& group = rstep.groups[g];
      for (std::size_t k = 0; k < group.routes.size(); ++k) {
        const Route& route = group.routes[k];
        const std::int64_t spikes = step.groups[g].links[k].spikes;
        const Interval busy{group.cycle_offset, group.cycle_offset + spikes * n};

        edge_ids.clear();
        for (std::size_t i = 1; i < route.path.size(); ++i) {
          edge_ids.push_back(topo.edge_index(route.path[i - 1], route.path[i]));
        }
        std::size_t blocked = edge_ids.size();
        for (std::size_t i = 0; i < edge_ids.size() && blocked == edge_ids.size(); ++i) {
          for (const Interval& h : held[static_cast<std::size_t>(edge_ids[i])]) {
            if (h.begin < busy.end && busy.begin < h.end) {
              blocked = i;
              break;
            }
          }
        }

        const bool delivered = blocked == edge_ids.size();
        const auto hops = static_cast<std::int64_t>(blocked);
        sr.offered += spikes;
        if (delivered) {
          sr.delivered += spikes;
          latency_sum += spikes * (group.cycle_offset + hops) + n * spikes * (spikes - 1) / 2;
          for (int e : edge_ids) {
            auto& list = held[static_cast<std::size_t>(e)];
            if (list.empty()) touched.push_back(e);
            list.push_back(busy);
          }
        } else {
          sr.dropped += spikes;
        }
        step_hops += hops * spikes;

        // Node path[i] is configured once both of its path edges are reached.
        for (std::size_t i = 1; i < route.path.size() - 1 && i < blocked; ++i) {
          const std::pair<int, int> wanted{std::min(edge_ids[i - 1], edge_ids[i]),
                                           std::max(edge_ids[i - 1], edge_ids[i])};
          auto& state = switch_state[static_cast<std::size_t>(route.path[i].index)];
          if (state.first >= 0 && state != wanted) ++step_switches;
          state = wanted;
        }
      }
    }

    sr.makespan = step_makespan(step, config.spike_cycles);
    sr.energy = e_seg * static_cast<double>(step_hops) + e_sw * static_cast<double>(step_switches);
    report.segment_traversals += step_hops;
    report.switch_reconfigurations += step_switches;
    report.spikes_offered += sr.offered;
    report.spikes_delivered += sr.delivered;
    report.spikes_dropped += sr.dropped;
    report.steps.push_back(sr);

    for (int e : touched) held[static_cast<std::size_t>(e)].clear();
    touched.clear();
  }

  report.total_dynamic_energy = e_seg * static_cast<double>(report.segment_traversals) +
                                e_sw * static_cast<double>(report.switch_reconfigurations);
  if (report.spikes_offered > 0) {
    report.spike_received_ratio = static_cast<double>(report.spikes_delivered) /
                                  static_cast<double>(report.spikes_offered);
  }
  if (report.spikes_delivered > 0) {
    report.avg_latency_cycles =
        static_cast<double>(latency_sum) / static_cast<double>(report.spikes_delivered);
    report.energy_per_spike =
        report.total_dynamic_energy / static_cast<double>(report.spikes_delivered);
  }
  report.edp = report.total_dynamic_energy * report.avg_latency_cycles;
  return report;
}

}  // namespace ladder

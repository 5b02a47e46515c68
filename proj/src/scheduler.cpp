#include "ladder/scheduler.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include <fmt/format.h>

#include "ladder/errors.hpp"

namespace ladder {

void SchedulerConfig::validate() const {
  if (spike_cycles < 1) throw InputError("spike_cycles must be >= 1");
}

std::int64_t Group::max_spikes() const {
  std::int64_t m = 0;
  for (const ScheduledLink& l : links) m = std::max(m, l.spikes);
  return m;
}

const ConflictChecker::Cached& ConflictChecker::lookup(LinkEndpoints link) {
  auto it = cache_.find(link);
  if (it == cache_.end()) {
    Cached entry{topo_.shortest_path(link.src, link.dst), {}};
    for (NodeId v : entry.path) entry.sorted_nodes.push_back(v.index);
    std::sort(entry.sorted_nodes.begin(), entry.sorted_nodes.end());
    it = cache_.emplace(link, std::move(entry)).first;
  }
  return it->second;
}

const NodePath& ConflictChecker::path(LinkEndpoints link) { return lookup(link).path; }

bool ConflictChecker::conflict(LinkEndpoints p, LinkEndpoints q) {
  if (mode_ == CrossingMode::Topological) return topological_cross(topo_, p, q);
  // Same predicate as path_cross on the canonical paths, without re-validating.
  const auto& x = lookup(p).sorted_nodes;
  const auto& y = lookup(q).sorted_nodes;
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

void sort_by_spikes(std::vector<ScheduledLink>& links) {
  std::stable_sort(links.begin(), links.end(), [](const ScheduledLink& a, const ScheduledLink& b) {
    if (a.spikes != b.spikes) return a.spikes > b.spikes;
    return a.link < b.link;
  });
}

std::vector<ScheduledLink> map_step(std::span<const SpikeEvent> events, const Mapping& mapping,
                                    const LadderTopology& topo) {
  std::vector<ScheduledLink> links;
  links.reserve(events.size());
  for (const SpikeEvent& e : events) {
    const LinkEndpoints ends = mapping.endpoints(e.src, e.dst);
    if (!topo.valid_tile(ends.src) || !topo.valid_tile(ends.dst)) {
      throw InputError(fmt::format("link {}->{} mapped outside the topology", e.src, e.dst));
    }
    links.push_back({ends, e.spikes});
  }
  return links;
}

namespace {

// Per-gap lane usage of a group.
class LaneLoad {
public:
  explicit LaneLoad(const LadderTopology& topo)
      : lanes_(topo.lane_count()), load_(static_cast<std::size_t>(std::max(0, topo.column_count() - 1)), 0) {}

  bool fits(ColumnSpan s) const {
    for (int c = s.lo; c < s.hi; ++c) {
      if (load_[static_cast<std::size_t>(c)] + 1 > lanes_) return false;
    }
    return true;
  }
  void add(ColumnSpan s, int by = 1) {
    for (int c = s.lo; c < s.hi; ++c) load_[static_cast<std::size_t>(c)] += by;
  }

private:
  int lanes_;
  std::vector<int> load_;
};

}  // namespace

void assign_offsets(std::vector<Group>& groups, int spike_cycles) {
  std::int64_t delay = 0;
  for (Group& g : groups) {
    g.cycle_offset = delay;
    delay += g.max_spikes() * spike_cycles;
  }
}

std::vector<Group> group_links(std::vector<ScheduledLink> links, const LadderTopology& topo,
                               const SchedulerConfig& config) {
  config.validate();
  sort_by_spikes(links);
  ConflictChecker checker(topo, config.mode);

  std::vector<Group> groups;
  std::vector<LaneLoad> loads;
  for (const ScheduledLink& link : links) {
    const ColumnSpan span = column_span(topo, link.link);
    bool placed = false;
    for (std::size_t g = 0; g < groups.size() && !placed; ++g) {
      if (!loads[g].fits(span)) continue;
      const bool crossed = std::any_of(
          groups[g].links.begin(), groups[g].links.end(),
          [&](const ScheduledLink& member) { return checker.conflict(link.link, member.link); });
      if (crossed) continue;
      groups[g].links.push_back(link);
      loads[g].add(span);
      placed = true;
    }
    if (!placed) {
      groups.push_back({0, {link}});
      loads.emplace_back(topo).add(span);
    }
  }
  assign_offsets(groups, config.spike_cycles);
  return groups;
}

Schedule schedule(const SpikeTrace& trace, const Mapping& mapping, const LadderTopology& topo,
                  const SchedulerConfig& config) {
  config.validate();
  Schedule out;
  out.spike_cycles = config.spike_cycles;
  for (const auto& step : trace.steps()) {
    out.steps.push_back({step.front().t, group_links(map_step(step, mapping, topo), topo, config)});
  }
  return out;
}

Schedule unscheduled(const SpikeTrace& trace, const Mapping& mapping, const LadderTopology& topo,
                     int spike_cycles) {
  if (spike_cycles < 1) throw InputError("spike_cycles must be >= 1");
  Schedule out;
  out.spike_cycles = spike_cycles;
  for (const auto& step : trace.steps()) {
    auto links = map_step(step, mapping, topo);
    sort_by_spikes(links);
    out.steps.push_back({step.front().t, {Group{0, std::move(links)}}});
  }
  return out;
}

int min_groups_oracle(std::span<const ScheduledLink> links, const LadderTopology& topo,
                      const SchedulerConfig& config) {
  if (links.size() > kOracleMaxLinks) {
    throw InputError(fmt::format("exact grouping limited to {} links, got {}", kOracleMaxLinks,
                                 links.size()));
  }
  if (links.empty()) return 0;

  const std::size_t n = links.size();
  ConflictChecker checker(topo, config.mode);
  std::vector<std::vector<bool>> clash(n, std::vector<bool>(n, false));
  std::vector<ColumnSpan> spans;
  for (std::size_t i = 0; i < n; ++i) {
    spans.push_back(column_span(topo, links[i].link));
    for (std::size_t j = 0; j < i; ++j) {
      clash[i][j] = clash[j][i] = checker.conflict(links[i].link, links[j].link);
    }
  }

  int best = static_cast<int>(n);
  std::vector<std::vector<std::size_t>> groups;
  std::vector<LaneLoad> loads;

  const std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (static_cast<int>(groups.size()) >= best) return;
    if (i == n) {
      best = static_cast<int>(groups.size());
      return;
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (!loads[g].fits(spans[i])) continue;
      const bool ok = std::none_of(groups[g].begin(), groups[g].end(),
                                   [&](std::size_t m) { return clash[i][m]; });
      if (!ok) continue;
      groups[g].push_back(i);
      loads[g].add(spans[i]);
      place(i + 1);
      loads[g].add(spans[i], -1);
      groups[g].pop_back();
    }
    groups.push_back({i});
    loads.emplace_back(topo).add(spans[i]);
    place(i + 1);
    loads.pop_back();
    groups.pop_back();
  };
  place(0);
  return best;
}

bool group_is_sound(std::span<const ScheduledLink> links, const LadderTopology& topo,
                    CrossingMode mode) {
  ConflictChecker checker(topo, mode);
  for (std::size_t i = 0; i < links.size(); ++i) {
    for (std::size_t j = i + 1; j < links.size(); ++j) {
      if (checker.conflict(links[i].link, links[j].link)) return false;
    }
  }
  std::vector<LinkEndpoints> ends;
  for (const ScheduledLink& l : links) ends.push_back(l.link);
  return lane_overlap_feasible(topo, ends);
}

std::int64_t step_makespan(const StepSchedule& step, int spike_cycles) {
  std::int64_t end = 0;
  for (const Group& g : step.groups) {
    end = std::max(end, g.cycle_offset + g.max_spikes() * spike_cycles);
  }
  return end;
}

std::int64_t schedule_makespan(const Schedule& schedule) {
  std::int64_t m = 0;
  for (const StepSchedule& step : schedule.steps) {
    m = std::max(m, step_makespan(step, schedule.spike_cycles));
  }
  return m;
}

}  // namespace ladder

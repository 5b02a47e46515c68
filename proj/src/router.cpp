#include "ladder/router.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

#include <fmt/format.h>

#include "ladder/errors.hpp"

namespace ladder {

void WeightState::add_path(const NodePath& path, std::int64_t spikes) {
  for (NodeId v : path) weights_[static_cast<std::size_t>(v.index)] += spikes;
}

std::int64_t WeightState::total() const {
  return std::accumulate(weights_.begin(), weights_.end(), std::int64_t{0});
}

namespace {

// Indices of `links` in routing order.
std::vector<std::size_t> routing_order(const LadderTopology& topo,
                                       std::span<const ScheduledLink> links) {
  const auto key = [&](const ScheduledLink& l) {
    const int same_row = topo.row(l.link.src) == topo.row(l.link.dst) ? 0 : 1;
    const int delta = topo.column(l.link.dst) - topo.column(l.link.src);
    const int orientation = delta > 0 ? 0 : (delta < 0 ? 1 : 2);
    return std::make_tuple(same_row, orientation, -l.spikes, l.link.src, l.link.dst);
  };
  std::vector<std::size_t> order(links.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key(links[a]) < key(links[b]);
  });
  return order;
}

}  // namespace

std::vector<ScheduledLink> sort_links(const LadderTopology& topo,
                                      std::span<const ScheduledLink> links) {
  std::vector<ScheduledLink> out;
  out.reserve(links.size());
  for (std::size_t i : routing_order(topo, links)) out.push_back(links[i]);
  return out;
}

std::int64_t path_weight(const WeightState& weights, const NodePath& path) {
  std::int64_t total = 0;
  for (std::size_t i = 1; i < path.size(); ++i) total += weights[path[i]];
  return total;
}

namespace {

std::optional<NodePath> search(const LadderTopology& topo, const WeightState& weights,
                               const std::vector<bool>* blocked, TileId src, TileId dst) {
  const NodeId start = topo.tile_node(src);
  const NodeId goal = topo.tile_node(dst);
  if (src == dst) throw InputError(fmt::format("cannot route tile {} to itself", src));
  const int goal_column = topo.node_column(goal);

  constexpr auto kInf = std::numeric_limits<std::int64_t>::max();
  const auto n = static_cast<std::size_t>(topo.node_count());
  std::vector<std::int64_t> g(n, kInf);
  std::vector<NodeId> parent(n);
  std::vector<bool> closed(n, false);

  using Entry = std::pair<std::int64_t, std::int32_t>;  // (f, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[static_cast<std::size_t>(start.index)] = 0;
  open.emplace(std::abs(topo.node_column(start) - goal_column), start.index);

  while (!open.empty()) {
    const NodeId v{open.top().second};
    open.pop();
    const auto vi = static_cast<std::size_t>(v.index);
    if (closed[vi]) continue;
    closed[vi] = true;
    if (v == goal) break;
    for (NodeId w : topo.neighbors(v)) {
      const auto wi = static_cast<std::size_t>(w.index);
      if (closed[wi] || (topo.is_tile(w) && w != goal)) continue;
      if (blocked && (*blocked)[wi]) continue;
      const std::int64_t candidate = g[vi] + weights[w];
      if (candidate < g[wi]) {
        g[wi] = candidate;
        parent[wi] = v;
        open.emplace(candidate + std::abs(topo.node_column(w) - goal_column), w.index);
      }
    }
  }
  if (!closed[static_cast<std::size_t>(goal.index)]) return std::nullopt;

  NodePath path;
  for (NodeId v = goal; v != start; v = parent[static_cast<std::size_t>(v.index)]) {
    path.push_back(v);
  }
  path.push_back(start);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

NodePath a_star(const LadderTopology& topo, const WeightState& weights, TileId src, TileId dst) {
  auto path = search(topo, weights, nullptr, src, dst);
  if (!path) throw StageError(fmt::format("tile {} unreachable from tile {}", dst, src));
  return std::move(*path);
}

std::optional<NodePath> a_star_avoiding(const LadderTopology& topo, const WeightState& weights,
                                        const std::vector<bool>& blocked, TileId src, TileId dst) {
  if (blocked.size() != weights.size()) throw InputError("blocked mask does not match topology");
  return search(topo, weights, &blocked, src, dst);
}

std::vector<NodePath> route_group(const LadderTopology& topo,
                                  std::span<const ScheduledLink> links) {
  WeightState weights(topo);
  std::vector<NodePath> paths(links.size());
  for (std::size_t i : routing_order(topo, links)) {
    paths[i] = a_star(topo, weights, links[i].link.src, links[i].link.dst);
    weights.add_path(paths[i], links[i].spikes);
  }
  return paths;
}

RouteTable route_all(const LadderTopology& topo, const Schedule& schedule) {
  RouteTable table;
  for (const StepSchedule& step : schedule.steps) {
    RoutedStep& out = table.steps.emplace_back();
    out.t = step.t;
    for (const Group& group : step.groups) {
      RoutedGroup& rg = out.groups.emplace_back();
      rg.cycle_offset = group.cycle_offset;
      auto paths = route_group(topo, group.links);
      for (std::size_t i = 0; i < group.links.size(); ++i) {
        rg.routes.push_back({group.links[i].link, std::move(paths[i])});
      }
    }
  }
  return table;
}

RouteTable route_shortest(const LadderTopology& topo, const Schedule& schedule) {
  RouteTable table;
  for (const StepSchedule& step : schedule.steps) {
    RoutedStep& out = table.steps.emplace_back();
    out.t = step.t;
    for (const Group& group : step.groups) {
      RoutedGroup& rg = out.groups.emplace_back();
      rg.cycle_offset = group.cycle_offset;
      for (const ScheduledLink& l : group.links) {
        rg.routes.push_back({l.link, topo.shortest_path(l.link.src, l.link.dst)});
      }
    }
  }
  return table;
}

namespace {

// A routed group under repair: members, their paths, and the congestion state
// routing them left behind.
struct OpenGroup {
  std::vector<ScheduledLink> links;
  std::vector<NodePath> paths;
  WeightState weights;
  std::vector<bool> used;

  explicit OpenGroup(const LadderTopology& topo)
      : weights(topo), used(static_cast<std::size_t>(topo.node_count()), false) {}

  void add(const ScheduledLink& link, NodePath path) {
    weights.add_path(path, link.spikes);
    for (NodeId v : path) used[static_cast<std::size_t>(v.index)] = true;
    links.push_back(link);
    paths.push_back(std::move(path));
  }

  std::int64_t max_spikes() const {
    std::int64_t m = 0;
    for (const ScheduledLink& l : links) m = std::max(m, l.spikes);
    return m;
  }

  bool admits(const LadderTopology& topo, const ScheduledLink& link) const {
    for (const ScheduledLink& m : links) {
      if (topological_cross(topo, link.link, m.link)) return false;
    }
    std::vector<LinkEndpoints> ends{link.link};
    for (const ScheduledLink& m : links) ends.push_back(m.link);
    return lane_overlap_feasible(topo, ends);
  }
};

}  // namespace

RepairedRouting route_with_repair(const LadderTopology& topo, const Schedule& schedule) {
  RepairedRouting result;
  result.schedule.spike_cycles = schedule.spike_cycles;

  for (const StepSchedule& step : schedule.steps) {
    std::vector<OpenGroup> groups;
    std::vector<ScheduledLink> pulled;

    for (const Group& group : step.groups) {
      const auto paths = route_group(topo, group.links);
      std::vector<bool> accepted(group.links.size(), false);
      std::vector<std::size_t> kept;
      for (std::size_t i : routing_order(topo, group.links)) {
        const bool crosses = std::any_of(kept.begin(), kept.end(), [&](std::size_t j) {
          return path_cross(topo, paths[i], paths[j]);
        });
        if (crosses) {
          pulled.push_back(group.links[i]);
        } else {
          accepted[i] = true;
          kept.push_back(i);
        }
      }
      // Rebuild in routing order so the weights match what route_group saw.
      OpenGroup& og = groups.emplace_back(topo);
      for (std::size_t i : kept) og.add(group.links[i], paths[i]);
    }

    result.demoted += static_cast<int>(pulled.size());
    sort_by_spikes(pulled);
    for (const ScheduledLink& link : pulled) {
      // Join the group whose delay grows least; a fresh group costs the full
      // spike count.
      std::int64_t best_growth = link.spikes;
      std::size_t best = groups.size();
      std::optional<NodePath> best_path;
      for (std::size_t h = 0; h < groups.size() && best_growth > 0; ++h) {
        OpenGroup& og = groups[h];
        const std::int64_t growth = std::max<std::int64_t>(0, link.spikes - og.max_spikes());
        if (growth >= best_growth || !og.admits(topo, link)) continue;
        auto path = a_star_avoiding(topo, og.weights, og.used, link.link.src, link.link.dst);
        if (!path) continue;
        best_growth = growth;
        best = h;
        best_path = std::move(path);
      }
      if (best < groups.size()) {
        groups[best].add(link, std::move(*best_path));
      } else {
        OpenGroup& og = groups.emplace_back(topo);
        og.add(link, topo.shortest_path(link.link.src, link.link.dst));
      }
    }

    StepSchedule out_step{step.t, {}};
    RoutedStep out_routes{step.t, {}};
    for (OpenGroup& og : groups) {
      out_step.groups.push_back({0, og.links});
    }
    assign_offsets(out_step.groups, schedule.spike_cycles);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      RoutedGroup& rg = out_routes.groups.emplace_back();
      rg.cycle_offset = out_step.groups[g].cycle_offset;
      for (std::size_t k = 0; k < groups[g].links.size(); ++k) {
        rg.routes.push_back({groups[g].links[k].link, std::move(groups[g].paths[k])});
      }
    }
    result.schedule.steps.push_back(std::move(out_step));
    result.routes.steps.push_back(std::move(out_routes));
  }
  return result;
}

}  // namespace ladder

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ladder/scheduler.hpp"
#include "ladder/topology.hpp"

namespace ladder {

struct Route {
  LinkEndpoints link;
  NodePath path;

  friend bool operator==(const Route&, const Route&) = default;
};

struct RoutedGroup {
  std::int64_t cycle_offset = 0;
  std::vector<Route> routes;

  friend bool operator==(const RoutedGroup&, const RoutedGroup&) = default;
};

struct RoutedStep {
  std::int64_t t = 0;
  std::vector<RoutedGroup> groups;

  friend bool operator==(const RoutedStep&, const RoutedStep&) = default;
};

// Mirrors a Schedule: steps, groups and routes appear in the same order as
// the schedule's steps, groups and links.
struct RouteTable {
  std::vector<RoutedStep> steps;

  friend bool operator==(const RouteTable&, const RouteTable&) = default;
};

// Per-node congestion weights, all starting at 1.
class WeightState {
public:
  explicit WeightState(const LadderTopology& topo)
      : weights_(static_cast<std::size_t>(topo.node_count()), 1) {}

  std::int64_t operator[](NodeId v) const { return weights_[static_cast<std::size_t>(v.index)]; }
  void set(NodeId v, std::int64_t w) { weights_[static_cast<std::size_t>(v.index)] = w; }
  void add_path(const NodePath& path, std::int64_t spikes);
  void reset() { std::fill(weights_.begin(), weights_.end(), 1); }
  std::int64_t total() const;
  std::size_t size() const noexcept { return weights_.size(); }

private:
  std::vector<std::int64_t> weights_;
};

// Same-row links first; then left-to-right, right-to-left, same-column;
// then descending spikes; then ascending (src, dst).
std::vector<ScheduledLink> sort_links(const LadderTopology& topo,
                                      std::span<const ScheduledLink> links);

// Sum of the weights of every node entered after the first.
std::int64_t path_weight(const WeightState& weights, const NodePath& path);

// Minimum-weight path under the node-entry convention, with the column
// distance to the destination as heuristic. Ties go to the lower node id.
NodePath a_star(const LadderTopology& topo, const WeightState& weights, TileId src, TileId dst);

// a_star restricted to nodes not marked in `blocked` (indexed by NodeId);
// empty when no such path exists.
std::optional<NodePath> a_star_avoiding(const LadderTopology& topo, const WeightState& weights,
                                        const std::vector<bool>& blocked, TileId src, TileId dst);

// Routes links one by one in sort_links order, inflating the weight of every
// node on each chosen path by the link's spikes. Paths are returned in input
// order.
std::vector<NodePath> route_group(const LadderTopology& topo,
                                  std::span<const ScheduledLink> links);

// route_group over every group of the schedule, weights fresh per group.
RouteTable route_all(const LadderTopology& topo, const Schedule& schedule);

// Canonical shortest path for every link.
RouteTable route_shortest(const LadderTopology& topo, const Schedule& schedule);

struct RepairedRouting {
  Schedule schedule;
  RouteTable routes;
  // Links moved out of their original group.
  int demoted = 0;
};

// Routes each group with route_group and pulls out every link whose path
// crosses an earlier link's path (in sort order). Pulled links, in descending
// spike order, join the group whose delay grows least (earliest on ties)
// among those they do not topologically conflict with, that stay
// lane-feasible, and in which a path avoiding every node already used by the
// group exists (a_star_avoiding under the group's congestion weights).
// Otherwise they open a trailing group on the shortest path.
// Offsets are recomputed afterwards; routed paths within a group never cross.
RepairedRouting route_with_repair(const LadderTopology& topo, const Schedule& schedule);

}  // namespace ladder

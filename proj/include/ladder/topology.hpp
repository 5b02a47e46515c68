#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ladder {

using TileId = std::int32_t;

// Index into LadderTopology's node table. Tiles occupy [0, T), switches follow
// lane-major: T + lane * (T / 2) + column.
struct NodeId {
  std::int32_t index = -1;

  friend auto operator<=>(NodeId, NodeId) = default;
};

using NodePath = std::vector<NodeId>;

struct Edge {
  NodeId a;
  NodeId b;  // a < b
};

struct LinkEndpoints {
  TileId src = 0;
  TileId dst = 0;

  friend auto operator<=>(const LinkEndpoints&, const LinkEndpoints&) = default;
};

// Two rows of tiles flanking `lane_count` segmented lanes. Every lane has one
// switch per column; switches connect horizontally along a lane and vertically
// to the neighbouring lanes in the same column. Top-row tiles attach to lane 0,
// bottom-row tiles to the last lane.
class LadderTopology {
public:
  static LadderTopology build(int tile_count, int lane_count);

  int tile_count() const noexcept { return tile_count_; }
  int lane_count() const noexcept { return lane_count_; }
  int column_count() const noexcept { return tile_count_ / 2; }
  int node_count() const noexcept { return static_cast<int>(adjacency_.size()); }
  int switch_count() const noexcept { return lane_count_ * column_count(); }

  NodeId tile_node(TileId t) const;
  NodeId switch_node(int lane, int column) const;

  bool is_tile(NodeId v) const noexcept { return v.index >= 0 && v.index < tile_count_; }
  bool valid_node(NodeId v) const noexcept { return v.index >= 0 && v.index < node_count(); }
  bool valid_tile(TileId t) const noexcept { return t >= 0 && t < tile_count_; }

  // Tile geometry.
  int row(TileId t) const;
  int column(TileId t) const;

  // Column of any node (a tile's column or a switch's column).
  int node_column(NodeId v) const;
  // Lane of a switch node; -1 for tiles.
  int node_lane(NodeId v) const;

  // Neighbours in ascending NodeId order.
  std::span<const NodeId> neighbors(NodeId v) const;
  bool adjacent(NodeId a, NodeId b) const;
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  // Index into edges() for an adjacent pair, -1 otherwise.
  int edge_index(NodeId a, NodeId b) const;

  // Hop count between two tiles, including both access edges.
  int distance(TileId a, TileId b) const;

  // Canonical shortest path: breadth-first search from Tile(a) that visits
  // neighbours in ascending id order and keeps the first parent found.
  NodePath shortest_path(TileId a, TileId b) const;

  // Throws InputError unless `path` is a non-empty sequence of valid nodes with
  // adjacent consecutive entries.
  void validate_path(const NodePath& path) const;

  std::string node_name(NodeId v) const;

private:
  LadderTopology(int tile_count, int lane_count);

  void add_edge(NodeId a, NodeId b);
  void check_tile(TileId t) const;

  int tile_count_ = 0;
  int lane_count_ = 0;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Edge> edges_;
};

// Column intervals strictly interleave, or the links share a tile.
bool topological_cross(const LadderTopology& topo, LinkEndpoints p, LinkEndpoints q);

// Paths share a node or an edge.
bool path_cross(const LadderTopology& topo, const NodePath& p, const NodePath& q);

// At every gap between adjacent columns, at most lane_count links span it.
bool lane_overlap_feasible(const LadderTopology& topo, std::span<const LinkEndpoints> links);

// Inclusive column interval [lo, hi] covered by a link.
struct ColumnSpan {
  int lo = 0;
  int hi = 0;
};
ColumnSpan column_span(const LadderTopology& topo, LinkEndpoints link);

}  // namespace ladder

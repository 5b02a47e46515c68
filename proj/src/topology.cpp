#include "ladder/topology.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <tuple>
#include <unordered_set>

#include <fmt/format.h>

#include "ladder/errors.hpp"

namespace ladder {

LadderTopology::LadderTopology(int tile_count, int lane_count)
    : tile_count_(tile_count), lane_count_(lane_count) {}

LadderTopology LadderTopology::build(int tile_count, int lane_count) {
  if (tile_count < 2 || tile_count % 2 != 0) {
    throw InputError(fmt::format("tile count must be even and >= 2, got {}", tile_count));
  }
  if (lane_count < 1) {
    throw InputError(fmt::format("lane count must be >= 1, got {}", lane_count));
  }

  LadderTopology topo(tile_count, lane_count);
  const int columns = tile_count / 2;
  topo.adjacency_.resize(static_cast<std::size_t>(tile_count + lane_count * columns));

  for (int lane = 0; lane < lane_count; ++lane) {
    for (int col = 0; col + 1 < columns; ++col) {
      topo.add_edge(topo.switch_node(lane, col), topo.switch_node(lane, col + 1));
    }
  }
  for (int lane = 0; lane + 1 < lane_count; ++lane) {
    for (int col = 0; col < columns; ++col) {
      topo.add_edge(topo.switch_node(lane, col), topo.switch_node(lane + 1, col));
    }
  }
  for (TileId t = 0; t < tile_count; ++t) {
    const int lane = topo.row(t) == 0 ? 0 : lane_count - 1;
    topo.add_edge(topo.tile_node(t), topo.switch_node(lane, topo.column(t)));
  }

  for (auto& list : topo.adjacency_) {
    std::sort(list.begin(), list.end());
  }
  std::sort(topo.edges_.begin(), topo.edges_.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return topo;
}

void LadderTopology::add_edge(NodeId a, NodeId b) {
  if (b < a) std::swap(a, b);
  adjacency_[static_cast<std::size_t>(a.index)].push_back(b);
  adjacency_[static_cast<std::size_t>(b.index)].push_back(a);
  edges_.push_back({a, b});
}

void LadderTopology::check_tile(TileId t) const {
  if (!valid_tile(t)) {
    throw InputError(fmt::format("tile {} out of range [0, {})", t, tile_count_));
  }
}

NodeId LadderTopology::tile_node(TileId t) const {
  check_tile(t);
  return NodeId{t};
}

NodeId LadderTopology::switch_node(int lane, int column) const {
  if (lane < 0 || lane >= lane_count_ || column < 0 || column >= column_count()) {
    throw InputError(fmt::format("switch ({}, {}) out of range", lane, column));
  }
  return NodeId{tile_count_ + lane * column_count() + column};
}

int LadderTopology::row(TileId t) const {
  check_tile(t);
  return t < column_count() ? 0 : 1;
}

int LadderTopology::column(TileId t) const {
  check_tile(t);
  return t % column_count();
}

int LadderTopology::node_column(NodeId v) const {
  if (is_tile(v)) return column(v.index);
  return (v.index - tile_count_) % column_count();
}

int LadderTopology::node_lane(NodeId v) const {
  if (is_tile(v)) return -1;
  return (v.index - tile_count_) / column_count();
}

std::span<const NodeId> LadderTopology::neighbors(NodeId v) const {
  return adjacency_.at(static_cast<std::size_t>(v.index));
}

bool LadderTopology::adjacent(NodeId a, NodeId b) const {
  if (!valid_node(a) || !valid_node(b)) return false;
  const auto list = neighbors(a);
  return std::binary_search(list.begin(), list.end(), b);
}

int LadderTopology::edge_index(NodeId a, NodeId b) const {
  if (b < a) std::swap(a, b);
  const auto it = std::lower_bound(
      edges_.begin(), edges_.end(), Edge{a, b},
      [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  if (it == edges_.end() || it->a != a || it->b != b) return -1;
  return static_cast<int>(it - edges_.begin());
}

int LadderTopology::distance(TileId a, TileId b) const {
  check_tile(a);
  check_tile(b);
  if (a == b) return 0;
  const int horizontal = std::abs(column(a) - column(b));
  const int vertical = row(a) == row(b) ? 0 : lane_count_ - 1;
  return horizontal + vertical + 2;
}

NodePath LadderTopology::shortest_path(TileId a, TileId b) const {
  const NodeId from = tile_node(a);
  const NodeId to = tile_node(b);
  if (a == b) return {from};

  std::vector<NodeId> parent(adjacency_.size(), NodeId{});
  std::vector<bool> seen(adjacency_.size(), false);
  std::deque<NodeId> frontier{from};
  seen[static_cast<std::size_t>(from.index)] = true;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop_front();
    if (v == to) break;
    for (NodeId w : neighbors(v)) {
      auto idx = static_cast<std::size_t>(w.index);
      if (seen[idx]) continue;
      seen[idx] = true;
      parent[idx] = v;
      frontier.push_back(w);
    }
  }

  NodePath path;
  for (NodeId v = to; v != from; v = parent[static_cast<std::size_t>(v.index)]) {
    path.push_back(v);
  }
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

void LadderTopology::validate_path(const NodePath& path) const {
  if (path.empty()) throw InputError("empty path");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!valid_node(path[i])) {
      throw InputError(fmt::format("path node {} out of range", path[i].index));
    }
    if (i > 0 && !adjacent(path[i - 1], path[i])) {
      throw InputError(fmt::format("path nodes {} and {} are not adjacent",
                                   node_name(path[i - 1]), node_name(path[i])));
    }
  }
}

std::string LadderTopology::node_name(NodeId v) const {
  if (is_tile(v)) return fmt::format("T{}", v.index);
  if (!valid_node(v)) return fmt::format("?{}", v.index);
  return fmt::format("S{}.{}", node_lane(v), node_column(v));
}

ColumnSpan column_span(const LadderTopology& topo, LinkEndpoints link) {
  const int a = topo.column(link.src);
  const int b = topo.column(link.dst);
  return {std::min(a, b), std::max(a, b)};
}

bool topological_cross(const LadderTopology& topo, LinkEndpoints p, LinkEndpoints q) {
  if (p.src == q.src || p.src == q.dst || p.dst == q.src || p.dst == q.dst) return true;
  const ColumnSpan x = column_span(topo, p);
  const ColumnSpan y = column_span(topo, q);
  return (x.lo < y.lo && y.lo < x.hi && x.hi < y.hi) ||
         (y.lo < x.lo && x.lo < y.hi && y.hi < x.hi);
}

bool path_cross(const LadderTopology& topo, const NodePath& p, const NodePath& q) {
  topo.validate_path(p);
  topo.validate_path(q);
  std::unordered_set<std::int32_t> nodes;
  for (NodeId v : p) nodes.insert(v.index);
  for (NodeId v : q) {
    if (nodes.contains(v.index)) return true;
  }
  // Edge sharing implies node sharing, so the node test is already exhaustive.
  return false;
}

bool lane_overlap_feasible(const LadderTopology& topo, std::span<const LinkEndpoints> links) {
  const int gaps = topo.column_count() - 1;
  if (gaps <= 0) return true;
  // Difference array over gaps; gap c sits between columns c and c+1.
  std::vector<int> delta(static_cast<std::size_t>(gaps) + 1, 0);
  for (const LinkEndpoints& link : links) {
    const ColumnSpan s = column_span(topo, link);
    if (s.lo == s.hi) continue;
    ++delta[static_cast<std::size_t>(s.lo)];
    --delta[static_cast<std::size_t>(s.hi)];
  }
  int load = 0;
  for (int c = 0; c < gaps; ++c) {
    load += delta[static_cast<std::size_t>(c)];
    if (load > topo.lane_count()) return false;
  }
  return true;
}

}  // namespace ladder

#include <doctest.h>

#include <set>

#include "ladder/errors.hpp"
#include "ladder/topology.hpp"
#include "oracles.hpp"

using namespace ladder;

namespace {

int count_edges(const LadderTopology& topo, bool (*pred)(const LadderTopology&, Edge)) {
  int n = 0;
  for (Edge e : topo.edges()) n += pred(topo, e) ? 1 : 0;
  return n;
}

bool is_access(const LadderTopology& topo, Edge e) { return topo.is_tile(e.a) || topo.is_tile(e.b); }
bool is_horizontal(const LadderTopology& topo, Edge e) {
  return !is_access(topo, e) && topo.node_lane(e.a) == topo.node_lane(e.b);
}

}  // namespace

TEST_CASE("build sizes") {
  const auto t = LadderTopology::build(8, 3);
  CHECK(t.tile_count() == 8);
  CHECK(t.switch_count() == 12);
  CHECK(t.node_count() == 20);
  // 3 lanes * 3 segments + 2 lane gaps * 4 columns + 8 access edges
  CHECK(t.edges().size() == 9 + 8 + 8);

  const auto small = LadderTopology::build(2, 1);
  CHECK(small.switch_count() == 1);
  CHECK(count_edges(small, is_access) == 2);
  CHECK(count_edges(small, is_horizontal) == 0);
}

TEST_CASE("build rejects bad shapes") {
  CHECK_THROWS_AS(LadderTopology::build(7, 2), InputError);
  CHECK_THROWS_AS(LadderTopology::build(0, 2), InputError);
  CHECK_THROWS_AS(LadderTopology::build(8, 0), InputError);
}

TEST_CASE("tile attachment") {
  const auto t = LadderTopology::build(8, 3);
  CHECK(t.row(0) == 0);
  CHECK(t.row(4) == 1);
  CHECK(t.column(5) == 1);
  CHECK(t.adjacent(t.tile_node(1), t.switch_node(0, 1)));
  CHECK(t.adjacent(t.tile_node(5), t.switch_node(2, 1)));
  CHECK_FALSE(t.adjacent(t.tile_node(5), t.switch_node(0, 1)));
  CHECK(t.node_name(t.switch_node(2, 3)) == "S2.3");
  CHECK(t.node_name(t.tile_node(6)) == "T6");
}

TEST_CASE("distance examples") {
  const auto t = LadderTopology::build(8, 3);
  CHECK(t.distance(0, 0) == 0);
  CHECK(t.distance(0, 1) == 3);
  CHECK(t.distance(0, 4) == 4);
}

TEST_CASE("distance agrees with BFS and is a metric") {
  for (auto [tiles, lanes] : {std::pair{2, 1}, {4, 2}, {8, 3}, {12, 1}, {16, 4}}) {
    const auto t = LadderTopology::build(tiles, lanes);
    for (TileId a = 0; a < tiles; ++a) {
      for (TileId b = 0; b < tiles; ++b) {
        CHECK(t.distance(a, b) == oracle::bfs_distance(t, a, b));
        CHECK(t.distance(a, b) == t.distance(b, a));
        CHECK((t.distance(a, b) == 0) == (a == b));
        for (TileId c = 0; c < tiles; ++c) {
          CHECK(t.distance(a, c) <= t.distance(a, b) + t.distance(b, c));
        }
      }
    }
  }
}

TEST_CASE("shortest_path is canonical and valid") {
  const auto t = LadderTopology::build(10, 3);
  for (TileId a = 0; a < 10; ++a) {
    for (TileId b = 0; b < 10; ++b) {
      if (a == b) continue;
      const NodePath p = t.shortest_path(a, b);
      CHECK_NOTHROW(t.validate_path(p));
      CHECK(p.front() == t.tile_node(a));
      CHECK(p.back() == t.tile_node(b));
      CHECK(static_cast<int>(p.size()) - 1 == t.distance(a, b));
      CHECK(p == t.shortest_path(a, b));
    }
  }
}

TEST_CASE("build is deterministic") {
  const auto x = LadderTopology::build(12, 4);
  const auto y = LadderTopology::build(12, 4);
  REQUIRE(x.edges().size() == y.edges().size());
  for (std::size_t i = 0; i < x.edges().size(); ++i) {
    CHECK(x.edges()[i].a == y.edges()[i].a);
    CHECK(x.edges()[i].b == y.edges()[i].b);
  }
}

TEST_CASE("topological_cross examples") {
  const auto t = LadderTopology::build(8, 3);
  CHECK(topological_cross(t, {0, 2}, {1, 3}));
  CHECK_FALSE(topological_cross(t, {0, 3}, {1, 2}));
  CHECK(topological_cross(t, {0, 2}, {0, 5}));
  // columns touching at one end do not interleave
  CHECK_FALSE(topological_cross(t, {0, 1}, {5, 6}));
}

TEST_CASE("topological_cross matches oracle and is symmetric") {
  const auto t = LadderTopology::build(10, 2);
  for (TileId a = 0; a < 10; ++a)
    for (TileId b = 0; b < 10; ++b)
      for (TileId c = 0; c < 10; ++c)
        for (TileId d = 0; d < 10; ++d) {
          if (a == b || c == d) continue;
          const LinkEndpoints p{a, b}, q{c, d};
          CHECK(topological_cross(t, p, q) == oracle::crosses(t, p, q));
          CHECK(topological_cross(t, p, q) == topological_cross(t, q, p));
        }
}

TEST_CASE("path_cross") {
  const auto t = LadderTopology::build(8, 3);
  const NodePath p = t.shortest_path(0, 1);
  CHECK(path_cross(t, p, p));
  CHECK_FALSE(path_cross(t, t.shortest_path(0, 1), t.shortest_path(2, 3)));
  // T0 -> S0.0 -> S0.1 -> T1 and T5 -> S2.1 -> S1.1 -> S0.1 -> S0.2 -> T2 meet only at S0.1
  const NodePath q{t.tile_node(5), t.switch_node(2, 1), t.switch_node(1, 1), t.switch_node(0, 1),
                   t.switch_node(0, 2), t.tile_node(2)};
  CHECK(path_cross(t, p, q));
  const NodePath broken{t.tile_node(0), t.switch_node(2, 3)};
  CHECK_THROWS_AS(path_cross(t, p, broken), InputError);
  CHECK_THROWS_AS(t.validate_path({}), InputError);
}

TEST_CASE("path_cross agrees with node-set oracle") {
  const auto t = LadderTopology::build(10, 3);
  for (TileId a = 0; a < 10; ++a)
    for (TileId b = 0; b < 10; ++b)
      for (TileId c = 0; c < 10; c += 3)
        for (TileId d = 1; d < 10; d += 2) {
          if (a == b || c == d) continue;
          const auto p = t.shortest_path(a, b);
          const auto q = t.shortest_path(c, d);
          CHECK(path_cross(t, p, q) == oracle::paths_share_node(p, q));
        }
}

TEST_CASE("lane_overlap_feasible examples") {
  const auto t8 = LadderTopology::build(8, 3);
  const std::vector<LinkEndpoints> four{{0, 3}, {4, 7}, {0, 7}, {4, 3}};
  CHECK_FALSE(lane_overlap_feasible(t8, four));
  const std::vector<LinkEndpoints> nested{{0, 3}, {1, 2}, {4, 5}};
  CHECK(lane_overlap_feasible(t8, nested));

  const auto t1 = LadderTopology::build(8, 1);
  const std::vector<LinkEndpoints> disjoint{{0, 1}, {2, 3}};
  CHECK(lane_overlap_feasible(t1, disjoint));
  const std::vector<LinkEndpoints> shared_gap{{0, 1}, {4, 5}};
  CHECK_FALSE(lane_overlap_feasible(t1, shared_gap));
}

TEST_CASE("lane_overlap_feasible agrees with gap counting") {
  const auto t = LadderTopology::build(12, 2);
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<int>(state >> 33);
  };
  for (int round = 0; round < 500; ++round) {
    std::vector<LinkEndpoints> links;
    const int k = next() % 6;
    for (int i = 0; i < k; ++i) {
      const TileId a = next() % 12;
      TileId b = next() % 12;
      if (a == b) b = (b + 1) % 12;
      links.push_back({a, b});
    }
    CHECK(lane_overlap_feasible(t, links) == (oracle::max_gap_load(t, links) <= 2));
  }
}

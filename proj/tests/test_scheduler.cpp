#include <doctest.h>

#include <algorithm>

#include "ladder/errors.hpp"
#include "ladder/random.hpp"
#include "ladder/scheduler.hpp"
#include "oracles.hpp"

using namespace ladder;

namespace {

std::vector<ScheduledLink> random_step(const LadderTopology& topo, Rng& rng, int count) {
  std::vector<ScheduledLink> links;
  while (static_cast<int>(links.size()) < count) {
    const auto a = static_cast<TileId>(rng.below(static_cast<std::uint64_t>(topo.tile_count())));
    const auto b = static_cast<TileId>(rng.below(static_cast<std::uint64_t>(topo.tile_count())));
    if (a == b) continue;
    const bool dup = std::any_of(links.begin(), links.end(), [&](const ScheduledLink& l) {
      return l.link == LinkEndpoints{a, b};
    });
    if (!dup) links.push_back({{a, b}, rng.between(1, 9)});
  }
  return links;
}

bool brute_sound(const LadderTopology& topo, const Group& g, CrossingMode mode) {
  std::vector<LinkEndpoints> ends;
  for (std::size_t i = 0; i < g.links.size(); ++i) {
    ends.push_back(g.links[i].link);
    for (std::size_t j = 0; j < i; ++j) {
      const auto p = g.links[i].link, q = g.links[j].link;
      const bool clash = mode == CrossingMode::Topological
                             ? oracle::crosses(topo, p, q)
                             : oracle::paths_share_node(topo.shortest_path(p.src, p.dst),
                                                        topo.shortest_path(q.src, q.dst));
      if (clash) return false;
    }
  }
  return oracle::max_gap_load(topo, ends) <= topo.lane_count();
}

}  // namespace

TEST_CASE("one link per step") {
  const auto topo = LadderTopology::build(8, 3);
  const auto w = make_workload(3, {{0, 0, 1, 4}, {1, 1, 2, 2}, {5, 2, 0, 7}});
  const auto s = schedule(w.trace, Mapping({0, 5, 2}), topo, {CrossingMode::Topological, 1});
  REQUIRE(s.steps.size() == 3);
  for (const auto& step : s.steps) {
    REQUIRE(step.groups.size() == 1);
    CHECK(step.groups[0].cycle_offset == 0);
  }
  CHECK(s.steps[2].t == 5);
}

TEST_CASE("first-fit grouping example") {
  const auto topo = LadderTopology::build(8, 3);
  const ScheduledLink l1{{0, 2}, 5}, l2{{1, 3}, 4}, l3{{6, 7}, 3};
  REQUIRE(topological_cross(topo, l1.link, l2.link));
  REQUIRE_FALSE(topological_cross(topo, l1.link, l3.link));
  REQUIRE_FALSE(topological_cross(topo, l2.link, l3.link));
  for (int n : {1, 2}) {
    const auto groups = group_links({l3, l2, l1}, topo, {CrossingMode::Topological, n});
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].links == std::vector<ScheduledLink>{l1, l3});
    CHECK(groups[0].cycle_offset == 0);
    CHECK(groups[1].links == std::vector<ScheduledLink>{l2});
    CHECK(groups[1].cycle_offset == 5 * n);
  }
}

TEST_CASE("lane capacity forces a new group") {
  const auto topo = LadderTopology::build(8, 1);
  const ScheduledLink a{{0, 1}, 2}, b{{4, 5}, 1};
  REQUIRE_FALSE(topological_cross(topo, a.link, b.link));
  CHECK(group_links({a, b}, topo, {CrossingMode::Topological, 1}).size() == 2);
  const auto wide = LadderTopology::build(8, 2);
  CHECK(group_links({a, b}, wide, {CrossingMode::Topological, 1}).size() == 1);
}

TEST_CASE("sort_by_spikes") {
  std::vector<ScheduledLink> v{{{3, 1}, 2}, {{0, 1}, 5}, {{2, 1}, 2}, {{1, 0}, 2}};
  sort_by_spikes(v);
  CHECK(v == std::vector<ScheduledLink>{{{0, 1}, 5}, {{1, 0}, 2}, {{2, 1}, 2}, {{3, 1}, 2}});
}

TEST_CASE("oracle examples") {
  const auto topo = LadderTopology::build(8, 3);
  const SchedulerConfig cfg{CrossingMode::Topological, 1};
  const std::vector<ScheduledLink> apart{{{0, 1}, 1}, {{2, 3}, 1}, {{6, 7}, 1}};
  CHECK(min_groups_oracle(apart, topo, cfg) == 1);
  const std::vector<ScheduledLink> star{{{0, 1}, 1}, {{0, 2}, 1}, {{0, 5}, 1}, {{3, 0}, 1}};
  CHECK(min_groups_oracle(star, topo, cfg) == 4);
  CHECK(min_groups_oracle({}, topo, cfg) == 0);
  const std::vector<ScheduledLink> too_many(13, ScheduledLink{{0, 1}, 1});
  CHECK_THROWS_AS(min_groups_oracle(too_many, topo, cfg), InputError);
}

TEST_CASE("makespan") {
  StepSchedule one{0, {Group{0, {{{0, 1}, 4}, {{2, 3}, 1}}}}};
  CHECK(step_makespan(one, 2) == 8);
  CHECK(schedule_makespan(Schedule{}) == 0);
  std::vector<Group> two{Group{0, {{{0, 1}, 4}}}, Group{0, {{{0, 2}, 3}}}};
  assign_offsets(two, 1);
  CHECK(two[1].cycle_offset == 4);
  CHECK(step_makespan({0, two}, 1) == 7);
}

TEST_CASE("grouping properties on random steps") {
  Rng rng(2024);
  for (int round = 0; round < 120; ++round) {
    const int tiles = 2 * static_cast<int>(rng.between(3, 8));
    const auto topo = LadderTopology::build(tiles, static_cast<int>(rng.between(1, 4)));
    const int count = static_cast<int>(rng.between(1, std::min(10, tiles)));
    const auto links = random_step(topo, rng, count);
    for (auto mode : {CrossingMode::Topological, CrossingMode::ShortestPath}) {
      const SchedulerConfig cfg{mode, static_cast<int>(rng.between(1, 3))};
      const auto groups = group_links(links, topo, cfg);
      std::vector<ScheduledLink> seen;
      std::int64_t offset = 0;
      for (const auto& g : groups) {
        CHECK(g.cycle_offset == offset);
        offset += g.max_spikes() * cfg.spike_cycles;
        CHECK(group_is_sound(g.links, topo, mode));
        CHECK(brute_sound(topo, g, mode));
        seen.insert(seen.end(), g.links.begin(), g.links.end());
      }
      auto expect = links;
      sort_by_spikes(expect);
      sort_by_spikes(seen);
      CHECK(seen == expect);
      CHECK(static_cast<int>(groups.size()) >= min_groups_oracle(links, topo, cfg));
      CHECK(groups == group_links(links, topo, cfg));
    }
  }
}

TEST_CASE("unscheduled keeps one group per step") {
  const auto topo = LadderTopology::build(6, 2);
  const auto w = make_workload(3, {{0, 0, 1, 1}, {0, 1, 2, 6}, {2, 2, 0, 3}});
  const auto s = unscheduled(w.trace, Mapping({0, 1, 2}), topo, 1);
  REQUIRE(s.steps.size() == 2);
  REQUIRE(s.steps[0].groups.size() == 1);
  CHECK(s.steps[0].groups[0].links.front().spikes == 6);
  CHECK(s.steps[0].groups[0].cycle_offset == 0);
}

TEST_CASE("scheduler rejects bad inputs") {
  const auto topo = LadderTopology::build(4, 2);
  const auto w = make_workload(3, {{0, 0, 2, 1}});
  CHECK_THROWS_AS(schedule(w.trace, Mapping({0, 1, 9}), topo, {}), InputError);
  CHECK_THROWS_AS(group_links({}, topo, {CrossingMode::Topological, 0}), InputError);
}

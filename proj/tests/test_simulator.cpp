#include <doctest.h>

#include "ladder/errors.hpp"
#include "ladder/simulator.hpp"
#include "oracles.hpp"

using namespace ladder;

namespace {

struct Case {
  LadderTopology topo;
  Workload workload;
  Mapping mapping;
};

// Clusters map to equal-numbered tiles.
Case identity_case(int tiles, int lanes, int clusters, std::vector<SpikeEvent> events) {
  std::vector<TileId> m(static_cast<std::size_t>(clusters));
  for (int c = 0; c < clusters; ++c) m[static_cast<std::size_t>(c)] = c;
  return {LadderTopology::build(tiles, lanes), make_workload(clusters, std::move(events)),
          Mapping(m)};
}

SimReport run_unscheduled(const Case& c, const SimConfig& cfg) {
  const auto s = unscheduled(c.workload.trace, c.mapping, c.topo, cfg.spike_cycles);
  return simulate(c.topo, c.workload.trace, c.mapping, s, route_shortest(c.topo, s), cfg);
}

}  // namespace

TEST_CASE("single link arithmetic") {
  const auto c = identity_case(8, 3, 2, {{0, 0, 1, 2}});
  const auto r = run_unscheduled(c, {});
  CHECK(r.spikes_delivered == 2);
  CHECK(r.spikes_dropped == 0);
  CHECK(r.total_dynamic_energy == 6.0);
  CHECK(r.avg_latency_cycles == 3.5);
  CHECK(r.spike_received_ratio == 1.0);
  REQUIRE(r.energy_per_spike);
  CHECK(*r.energy_per_spike == 3.0);
  CHECK(r.edp == 21.0);
  REQUIRE(r.steps.size() == 1);
  CHECK(r.steps[0].makespan == 2);
}

TEST_CASE("spike cycles stretch latency") {
  const auto c = identity_case(8, 3, 2, {{0, 0, 1, 3}});
  SimConfig cfg;
  cfg.spike_cycles = 2;
  // latencies 3, 5, 7
  CHECK(run_unscheduled(c, cfg).avg_latency_cycles == 5.0);
}

TEST_CASE("shared edge at the same offset drops the later link") {
  const auto c = identity_case(8, 3, 3, {{0, 0, 2, 5}, {0, 0, 1, 3}});
  const auto r = run_unscheduled(c, {});
  CHECK(r.spikes_offered == 8);
  CHECK(r.spikes_delivered == 5);
  CHECK(r.spikes_dropped == 3);
  CHECK(r.spike_received_ratio == doctest::Approx(5.0 / 8.0));
  // The dropped link is blocked on its first edge.
  CHECK(r.segment_traversals == 5 * 4);
}

TEST_CASE("partial path energy for blocked links") {
  // 4->5 holds S2.0-S2.1; 0->5 runs down column 0 and is blocked there.
  const auto c = identity_case(8, 3, 6, {{0, 4, 5, 4}, {0, 0, 5, 1}});
  const auto s = unscheduled(c.workload.trace, c.mapping, c.topo, 1);
  RouteTable rt = route_shortest(c.topo, s);
  const auto& topo = c.topo;
  rt.steps[0].groups[0].routes[1].path = {topo.tile_node(0), topo.switch_node(0, 0),
                                          topo.switch_node(1, 0), topo.switch_node(2, 0),
                                          topo.switch_node(2, 1), topo.tile_node(5)};
  const auto r = simulate(topo, c.workload.trace, c.mapping, s, rt, {});
  CHECK(r.spikes_dropped == 1);
  CHECK(r.segment_traversals == 4 * 3 + 3);
}

TEST_CASE("switch reconfiguration is tracked across steps") {
  const auto c = identity_case(8, 3, 5, {{0, 0, 1, 2}, {1, 0, 4, 1}});
  SimConfig cfg;
  cfg.energy_per_switch_config = 10.0;
  const auto r = run_unscheduled(c, cfg);
  CHECK(r.switch_reconfigurations == 1);
  CHECK(r.segment_traversals == 2 * 3 + 4);
  CHECK(r.total_dynamic_energy == 10.0 + 10.0);
  CHECK(r.steps[1].energy == 4.0 + 10.0);
}

TEST_CASE("conservation and determinism") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto w = synthesize({10, 3.0, 0.6, 8, seed, 8});
    const auto topo = LadderTopology::build(10, 2);
    const Mapping m = random_mapping(10, topo, seed);
    const Case c{topo, w, m};
    const auto r = run_unscheduled(c, {});
    CHECK(r.spikes_offered == r.spikes_delivered + r.spikes_dropped);
    std::int64_t total = 0;
    for (const auto& e : w.trace.events) total += e.spikes;
    CHECK(r.spikes_offered == total);
    CHECK(r.steps.size() == w.trace.steps().size());
    CHECK(r == run_unscheduled(c, {}));
  }
}

TEST_CASE("energy bridge with a drop-free schedule") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto w = synthesize({12, 1.5, 0.3, 20, seed, 8});
    const auto topo = LadderTopology::build(12, 4);
    const Mapping m = random_mapping(12, topo, seed + 40);
    const auto s = schedule(w.trace, m, topo, {CrossingMode::ShortestPath, 1});
    SimConfig cfg;
    cfg.energy_per_segment = 2.5;
    const auto r = simulate(topo, w.trace, m, s, route_shortest(topo, s), cfg);
    CHECK(r.spikes_dropped == 0);
    CHECK(r.total_dynamic_energy == 2.5 * static_cast<double>(cost_energy(w.graph, m, topo)));
    CHECK(r.segment_traversals == oracle::energy(w.graph, m.tiles(), topo));
  }
}

TEST_CASE("empty trace conventions") {
  const auto c = identity_case(4, 2, 2, {});
  const auto r = run_unscheduled(c, {});
  CHECK(r.spikes_offered == 0);
  CHECK(r.spike_received_ratio == 1.0);
  CHECK(r.avg_latency_cycles == 0.0);
  CHECK_FALSE(r.energy_per_spike);
}

TEST_CASE("budget overflow lists offending steps") {
  const auto c = identity_case(8, 3, 3, {{0, 0, 1, 5}, {3, 1, 2, 2}, {4, 0, 2, 9}});
  SimConfig cfg;
  cfg.cycles_per_time_step = 4;
  try {
    run_unscheduled(c, cfg);
    FAIL("expected overflow");
  } catch (const BudgetOverflow& e) {
    CHECK(e.steps() == std::vector<std::int64_t>{0, 4});
  }
}

TEST_CASE("coverage errors") {
  const auto c = identity_case(8, 3, 3, {{0, 0, 1, 2}, {1, 1, 2, 2}});
  const auto s = unscheduled(c.workload.trace, c.mapping, c.topo, 1);
  const auto rt = route_shortest(c.topo, s);

  Schedule short_s = s;
  short_s.steps.pop_back();
  CHECK_THROWS_AS(simulate(c.topo, c.workload.trace, c.mapping, short_s, rt, {}), StageError);

  RouteTable bent = rt;
  bent.steps[0].groups[0].routes[0].path.pop_back();
  CHECK_THROWS_AS(simulate(c.topo, c.workload.trace, c.mapping, s, bent, {}), StageError);

  Schedule wrong = s;
  wrong.steps[1].groups[0].links[0].spikes = 7;
  CHECK_THROWS_AS(simulate(c.topo, c.workload.trace, c.mapping, wrong, rt, {}), StageError);

  SimConfig n2;
  n2.spike_cycles = 2;
  CHECK_THROWS_AS(simulate(c.topo, c.workload.trace, c.mapping, s, rt, n2), StageError);

  SimConfig bad;
  bad.energy_per_segment = -1;
  CHECK_THROWS_AS(simulate(c.topo, c.workload.trace, c.mapping, s, rt, bad), InputError);
}

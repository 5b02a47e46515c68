#include <doctest.h>

#include "ladder/errors.hpp"
#include "ladder/mapper.hpp"
#include "oracles.hpp"

using namespace ladder;

namespace {

ClusterGraph chain(int n) {
  ClusterGraph g{n, {}};
  for (ClusterId i = 0; i + 1 < n; ++i) g.links.push_back({i, i + 1, 3 + i});
  return g;
}

MapperConfig objective(double alpha, double beta, int restarts = 50, std::uint64_t seed = 1) {
  MapperConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.perturbations = restarts;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("cost_energy examples") {
  const auto topo = LadderTopology::build(8, 3);
  CHECK(cost_energy({2, {}}, Mapping({0, 1}), topo) == 0);
  CHECK(cost_energy({2, {{0, 1, 5}}}, Mapping({0, 1}), topo) == 15);
}

TEST_CASE("cost_crossing examples") {
  const auto topo = LadderTopology::build(8, 3);
  // 0->1 and 2->3 sit side by side on the top row
  CHECK(cost_crossing({4, {{0, 1, 2}, {2, 3, 3}}}, Mapping({0, 1, 2, 3}), topo) == 0);
  // columns 0..2 and 1..3 interleave
  CHECK(cost_crossing({4, {{0, 1, 2}, {2, 3, 3}}}, Mapping({0, 2, 1, 3}), topo) == 5);
  // all three share cluster 0
  CHECK(cost_crossing({4, {{0, 1, 1}, {0, 2, 2}, {0, 3, 3}}}, Mapping({0, 1, 2, 3}), topo) == 12);
}

TEST_CASE("cost combination") {
  const auto topo = LadderTopology::build(8, 3);
  const ClusterGraph g{3, {{0, 1, 2}, {1, 2, 3}}};
  const Mapping m({0, 1, 2});
  REQUIRE(cost_energy(g, m, topo) == 15);
  REQUIRE(cost_crossing(g, m, topo) == 5);
  CHECK(cost(g, m, topo, objective(2, 3)) == 45.0);
  CHECK(cost(g, m, topo, objective(1, 0)) == 15.0);
  CHECK(cost(g, m, topo, objective(0, 1)) == 5.0);
}

TEST_CASE("costs agree with oracles on random mappings") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto w = synthesize({12, 1.5, 0.3, 10, seed, 8});
    const auto topo = LadderTopology::build(14, 4);
    const Mapping m = random_mapping(12, topo, seed);
    CHECK_NOTHROW(m.validate(w.graph, topo));
    CHECK(cost_energy(w.graph, m, topo) == oracle::energy(w.graph, m.tiles(), topo));
    CHECK(cost_crossing(w.graph, m, topo) == oracle::crossing(w.graph, m.tiles(), topo));
  }
}

TEST_CASE("mapping validation") {
  const auto topo = LadderTopology::build(4, 2);
  const ClusterGraph g{3, {{0, 1, 1}}};
  CHECK_THROWS_AS(Mapping({0, 0, 1}).validate(g, topo), InputError);
  CHECK_THROWS_AS(Mapping({0, 1, 4}).validate(g, topo), InputError);
  CHECK_THROWS_AS(Mapping({0, 1}).validate(g, topo), InputError);
  CHECK_NOTHROW(Mapping({3, 1, 0}).validate(g, topo));
  CHECK_THROWS_AS(cost_energy(g, Mapping({0, 1}), topo), InputError);
}

TEST_CASE("config validation") {
  const auto topo = LadderTopology::build(4, 2);
  const ClusterGraph g{3, {{0, 1, 1}}};
  CHECK_THROWS_AS(hill_climb(g, topo, objective(0, 0)), InputError);
  CHECK_THROWS_AS(hill_climb(g, topo, objective(-1, 2)), InputError);
  CHECK_THROWS_AS(hill_climb(g, topo, objective(1, 0, 0)), InputError);
  CHECK_THROWS_AS(hill_climb({5, {}}, topo, objective(1, 0)), InputError);
}

TEST_CASE("hill_climb single cluster") {
  const auto topo = LadderTopology::build(6, 2);
  const auto r = hill_climb({1, {}}, topo, objective(1, 1));
  CHECK(r.cost == 0.0);
  REQUIRE(r.history.size() == 1);
  CHECK(r.history[0].size() == 1);
}

TEST_CASE("hill_climb finds the chain optimum") {
  const auto topo = LadderTopology::build(4, 2);
  const auto g = chain(4);
  const auto r = hill_climb(g, topo, objective(1, 0));
  CHECK(r.cost == oracle::optimum(g, topo, 1, 0));
  CHECK(r.cost == brute_force(g, topo, objective(1, 0)).cost);
}

TEST_CASE("hill_climb bookkeeping matches full recomputation") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int c = 3 + static_cast<int>(seed % 14);
    const auto w = synthesize({c, std::min(c - 1.0, 1.0 + static_cast<double>(seed % 4)), 0.3, 4, seed, 9});
    const auto topo = LadderTopology::build(c + 2 + c % 2, ceil_sqrt(c));
    const double alpha = static_cast<double>(seed % 3) * 0.5;
    const auto cfg = objective(alpha, 1.0 - alpha * 0.5, 3, seed);
    const auto r = hill_climb(w.graph, topo, cfg);
    CAPTURE(seed);
    CHECK(r.energy == cost_energy(w.graph, r.mapping, topo));
    CHECK(r.crossing == cost_crossing(w.graph, r.mapping, topo));
    CHECK(r.cost == doctest::Approx(cost(w.graph, r.mapping, topo, cfg)));
    for (const auto& h : r.history) {
      REQUIRE_FALSE(h.empty());
      CHECK(r.cost <= h.front());
      CHECK(static_cast<int>(h.size()) - 1 <= cfg.iterations_for(topo));
      for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] < h[i - 1]);
    }
  }
}

TEST_CASE("hill_climb is deterministic") {
  const auto w = synthesize({10, 2.0, 0.3, 5, 3, 8});
  const auto topo = LadderTopology::build(10, 4);
  const auto a = hill_climb(w.graph, topo, objective(0, 1, 5, 9));
  const auto b = hill_climb(w.graph, topo, objective(0, 1, 5, 9));
  CHECK(a.mapping == b.mapping);
  CHECK(a.history == b.history);
}

TEST_CASE("monte_carlo") {
  const auto topo = LadderTopology::build(6, 3);
  const auto w = synthesize({6, 2.0, 0.3, 5, 11, 8});
  const auto one = monte_carlo(w.graph, topo, objective(1, 0), 1);
  CHECK(one.min_cost == one.mean_cost);
  const auto single = monte_carlo({1, {}}, topo, objective(1, 0), 20);
  CHECK(single.min_cost == 0.0);
  CHECK(single.mean_cost == 0.0);
  for (auto [a, b] : {std::pair{1.0, 0.0}, {0.0, 1.0}}) {
    const auto mc = monte_carlo(w.graph, topo, objective(a, b), 250);
    CHECK(mc.min_cost >= oracle::optimum(w.graph, topo, a, b));
    CHECK(mc.min_cost <= mc.mean_cost);
    CHECK(cost(w.graph, mc.best, topo, objective(a, b)) == mc.min_cost);
  }
  CHECK_THROWS_AS(monte_carlo(w.graph, topo, objective(1, 0), 0), InputError);
}

TEST_CASE("brute_force") {
  const auto t2 = LadderTopology::build(2, 1);
  CHECK(brute_force({2, {{0, 1, 1}}}, t2, objective(1, 0)).enumerated == 2);

  const auto t6 = LadderTopology::build(6, 2);
  const auto w = synthesize({5, 1.6, 0.3, 5, 4, 8});
  const auto r = brute_force(w.graph, t6, objective(1, 1));
  CHECK(r.enumerated == 720);
  CHECK(r.cost == oracle::optimum(w.graph, t6, 1, 1));
  CHECK_THROWS_AS(brute_force({2, {}}, LadderTopology::build(10, 2), objective(1, 0)), InputError);
}

TEST_CASE("brute_force optimum is scale invariant") {
  const auto topo = LadderTopology::build(6, 2);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto w = synthesize({5, 1.8, 0.3, 4, seed, 8});
    const auto base = brute_force(w.graph, topo, objective(1, 2));
    const auto scaled = brute_force(w.graph, topo, objective(3, 6));
    CHECK(scaled.cost == doctest::Approx(3 * base.cost));
    CHECK(cost(w.graph, scaled.mapping, topo, objective(1, 2)) == doctest::Approx(base.cost));
  }
}

TEST_CASE("symmetric graph has a unique optimum value") {
  const auto topo = LadderTopology::build(4, 2);
  const ClusterGraph g{2, {{0, 1, 4}, {1, 0, 4}}};
  const auto r = brute_force(g, topo, objective(1, 0));
  const Mapping mirrored({r.mapping.tile(1), r.mapping.tile(0)});
  CHECK(cost(g, mirrored, topo, objective(1, 0)) == r.cost);
}

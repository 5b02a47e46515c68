#pragma once

#include <cstdint>
#include <vector>

#include "ladder/topology.hpp"
#include "ladder/workload.hpp"

namespace ladder {

// Injective cluster -> tile assignment.
class Mapping {
public:
  Mapping() = default;
  explicit Mapping(std::vector<TileId> tile_of_cluster) : tiles_(std::move(tile_of_cluster)) {}

  int cluster_count() const noexcept { return static_cast<int>(tiles_.size()); }
  TileId tile(ClusterId c) const;
  const std::vector<TileId>& tiles() const noexcept { return tiles_; }

  LinkEndpoints endpoints(ClusterId src, ClusterId dst) const { return {tile(src), tile(dst)}; }

  // Throws InputError unless every cluster of `graph` is mapped to a distinct
  // tile of `topo`.
  void validate(const ClusterGraph& graph, const LadderTopology& topo) const;

  friend bool operator==(const Mapping&, const Mapping&) = default;

private:
  std::vector<TileId> tiles_;
};

struct MapperConfig {
  double alpha = 1.0;
  double beta = 0.0;
  int perturbations = 50;
  // Local-search iteration cap; 0 means "use the tile count".
  int max_iterations = 0;
  std::uint64_t seed = 0;

  void validate() const;
  int iterations_for(const LadderTopology& topo) const {
    return max_iterations > 0 ? max_iterations : topo.tile_count();
  }
};

// Sum of spikes times hop distance over all links.
std::int64_t cost_energy(const ClusterGraph& graph, const Mapping& mapping,
                         const LadderTopology& topo);

// Sum over unordered pairs of crossing links of their combined spikes.
std::int64_t cost_crossing(const ClusterGraph& graph, const Mapping& mapping,
                           const LadderTopology& topo);

double cost(const ClusterGraph& graph, const Mapping& mapping, const LadderTopology& topo,
            const MapperConfig& config);

Mapping random_mapping(int cluster_count, const LadderTopology& topo, std::uint64_t seed);

struct HillClimbResult {
  Mapping mapping;
  double cost = 0.0;
  std::int64_t energy = 0;
  std::int64_t crossing = 0;
  // One entry per restart: starting cost followed by the cost after each move.
  std::vector<std::vector<double>> history;
};

HillClimbResult hill_climb(const ClusterGraph& graph, const LadderTopology& topo,
                           const MapperConfig& config);

struct MonteCarloResult {
  double min_cost = 0.0;
  double mean_cost = 0.0;
  Mapping best;
};

MonteCarloResult monte_carlo(const ClusterGraph& graph, const LadderTopology& topo,
                             const MapperConfig& config, int samples);

struct BruteForceResult {
  Mapping mapping;
  double cost = 0.0;
  std::uint64_t enumerated = 0;
};

inline constexpr int kBruteForceMaxTiles = 8;

// Exhaustive search over every injective assignment.
BruteForceResult brute_force(const ClusterGraph& graph, const LadderTopology& topo,
                             const MapperConfig& config);

}  // namespace ladder

#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "ladder/mapper.hpp"
#include "ladder/router.hpp"
#include "ladder/scheduler.hpp"
#include "ladder/simulator.hpp"
#include "ladder/topology.hpp"
#include "ladder/workload.hpp"

namespace ladder {

// SL: crossing-cost mapping, no scheduling, shortest paths.
// DE: energy-cost mapping, no scheduling, shortest paths.
// TXS: SL mapping, topological-crossing schedule, shortest paths.
// SPXS: SL mapping, shortest-path-crossing schedule, shortest paths.
// SR: SL mapping, topological-crossing schedule, sorted weighted routing with repair.
enum class Variant { SL, DE, TXS, SPXS, SR };

inline constexpr std::array kAllVariants{Variant::SL, Variant::DE, Variant::TXS, Variant::SPXS,
                                         Variant::SR};

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

// `base` with the variant's (alpha, beta) objective.
MapperConfig mapping_objective(Variant v, MapperConfig base);

struct PipelineConfig {
  MapperConfig mapper;
  int spike_cycles = 1;
  SimConfig sim;
};

struct PipelineResult {
  Variant variant = Variant::SL;
  MapperConfig mapper;
  HillClimbResult mapping;
  Schedule schedule;
  RouteTable routes;
  SimReport report;
  // Links moved to trailing groups by route repair (SR only).
  int demoted = 0;
};

// Schedule, route and simulate with a precomputed mapping for the variant's
// objective.
PipelineResult run_pipeline(const Workload& workload, const LadderTopology& topo, Variant variant,
                            const PipelineConfig& config, const HillClimbResult& mapping);

PipelineResult run_pipeline(const Workload& workload, const LadderTopology& topo, Variant variant,
                            const PipelineConfig& config);

// Runs several variants, computing each distinct mapping objective once.
std::vector<PipelineResult> run_variants(const Workload& workload, const LadderTopology& topo,
                                         std::span<const Variant> variants,
                                         const PipelineConfig& config);

}  // namespace ladder

#include "ladder/pipeline.hpp"

#include <map>

#include <fmt/format.h>

#include "ladder/errors.hpp"

namespace ladder {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::SL: return "sl";
    case Variant::DE: return "de";
    case Variant::TXS: return "txs";
    case Variant::SPXS: return "spxs";
    case Variant::SR: return "sr";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (variant_name(v) == name) return v;
  }
  throw InputError(fmt::format("unknown variant \"{}\" (expected sl, de, txs, spxs or sr)", name));
}

MapperConfig mapping_objective(Variant v, MapperConfig base) {
  if (v == Variant::DE) {
    base.alpha = 1.0;
    base.beta = 0.0;
  } else {
    base.alpha = 0.0;
    base.beta = 1.0;
  }
  return base;
}

PipelineResult run_pipeline(const Workload& workload, const LadderTopology& topo, Variant variant,
                            const PipelineConfig& config, const HillClimbResult& mapping) {
  PipelineResult r;
  r.variant = variant;
  r.mapper = mapping_objective(variant, config.mapper);
  r.mapping = mapping;
  const Mapping& phi = mapping.mapping;
  phi.validate(workload.graph, topo);

  switch (variant) {
    case Variant::SL:
    case Variant::DE:
      r.schedule = unscheduled(workload.trace, phi, topo, config.spike_cycles);
      r.routes = route_shortest(topo, r.schedule);
      break;
    case Variant::TXS:
      r.schedule = schedule(workload.trace, phi, topo,
                            {CrossingMode::Topological, config.spike_cycles});
      r.routes = route_shortest(topo, r.schedule);
      break;
    case Variant::SPXS:
      r.schedule = schedule(workload.trace, phi, topo,
                            {CrossingMode::ShortestPath, config.spike_cycles});
      r.routes = route_shortest(topo, r.schedule);
      break;
    case Variant::SR: {
      auto repaired = route_with_repair(
          topo, schedule(workload.trace, phi, topo, {CrossingMode::Topological, config.spike_cycles}));
      r.schedule = std::move(repaired.schedule);
      r.routes = std::move(repaired.routes);
      r.demoted = repaired.demoted;
      break;
    }
  }

  SimConfig sim = config.sim;
  sim.spike_cycles = config.spike_cycles;
  r.report = simulate(topo, workload.trace, phi, r.schedule, r.routes, sim);
  return r;
}

PipelineResult run_pipeline(const Workload& workload, const LadderTopology& topo, Variant variant,
                            const PipelineConfig& config) {
  const auto mapping = hill_climb(workload.graph, topo, mapping_objective(variant, config.mapper));
  return run_pipeline(workload, topo, variant, config, mapping);
}

std::vector<PipelineResult> run_variants(const Workload& workload, const LadderTopology& topo,
                                         std::span<const Variant> variants,
                                         const PipelineConfig& config) {
  std::map<bool, HillClimbResult> by_objective;  // keyed on "energy objective"
  std::vector<PipelineResult> out;
  for (Variant v : variants) {
    const bool energy = v == Variant::DE;
    auto it = by_objective.find(energy);
    if (it == by_objective.end()) {
      it = by_objective
               .emplace(energy, hill_climb(workload.graph, topo, mapping_objective(v, config.mapper)))
               .first;
    }
    out.push_back(run_pipeline(workload, topo, v, config, it->second));
  }
  return out;
}

}  // namespace ladder

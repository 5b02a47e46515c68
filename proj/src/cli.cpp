#include "ladder/cli.hpp"

#include <filesystem>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ladder/errors.hpp"

namespace ladder {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Runs `body`, prefixing any error with the stage name while keeping its kind.
template <typename F>
auto in_stage(std::string_view stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const BudgetOverflow& e) {
    throw BudgetOverflow(fmt::format("{}: {}", stage, e.what()), e.steps());
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", stage, e.what()));
  } catch (const std::exception& e) {
    throw StageError(fmt::format("{}: {}", stage, e.what()));
  }
}

template <typename T>
T get_or(const json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw InputError(fmt::format("run config: bad value for \"{}\": {}", name, e.what()));
  }
}

Workload load_workload(const std::string& path) {
  return in_stage("workload", [&] { return parse_workload(read_text_file(path)); });
}

LadderTopology make_topology(int tiles, int lanes) {
  return in_stage("topology", [&] { return LadderTopology::build(tiles, lanes); });
}

std::string normalized(std::optional<double> baseline, std::optional<double> value) {
  if (!baseline || !value) return "";
  if (*baseline == 0.0) return *value == 0.0 ? "1" : "inf";
  return format_real(*value / *baseline);
}

}  // namespace

int resolve_tiles(std::optional<int> requested, int clusters) {
  int t = std::max(requested.value_or(clusters), clusters);
  t = std::max(t, 2);
  if (t % 2 != 0) ++t;
  return t;
}

int resolve_lanes(std::optional<int> requested, int clusters) {
  return requested.value_or(std::max(1, ceil_sqrt(clusters)));
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw InputError("run config must be a JSON object");
  RunConfig c;
  if (j.contains("workload")) {
    const json& w = j.at("workload");
    if (w.contains("file")) {
      c.workload_file = get_or<std::string>(w, "file", "");
    } else if (w.contains("generate")) {
      const json& g = w.at("generate");
      SynthesisParams p;
      p.cluster_count = get_or(g, "clusters", p.cluster_count);
      p.avg_degree = get_or(g, "degree", p.avg_degree);
      p.burstiness = get_or(g, "burstiness", p.burstiness);
      p.time_steps = get_or(g, "steps", p.time_steps);
      p.max_spikes = get_or(g, "max_spikes", p.max_spikes);
      c.generator = p;
    } else {
      throw InputError("run config: workload needs \"file\" or \"generate\"");
    }
  } else {
    throw InputError("run config: missing \"workload\"");
  }
  c.name = get_or<std::string>(j, "name", "");
  if (j.contains("tiles")) c.tiles = get_or(j, "tiles", 0);
  if (j.contains("lanes")) c.lanes = get_or(j, "lanes", 0);
  if (j.contains("mapper")) {
    const json& m = j.at("mapper");
    c.mapper.perturbations = get_or(m, "restarts", c.mapper.perturbations);
    c.mapper.max_iterations = get_or(m, "iterations", c.mapper.max_iterations);
  }
  c.spike_cycles = get_or(j, "spike_cycles", c.spike_cycles);
  if (j.contains("sim")) {
    c.sim = sim_config_from_json(j.at("sim"));
  }
  if (j.contains("variants")) {
    c.variants.clear();
    for (const auto& v : get_or<std::vector<std::string>>(j, "variants", {})) {
      c.variants.push_back(parse_variant(v));
    }
  }
  c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  return c;
}

void run_configured_pipeline(const RunConfig& config) {
  if (config.workload_file.has_value() == config.generator.has_value()) {
    throw InputError("pipeline needs exactly one workload source");
  }
  if (config.variants.empty()) throw InputError("pipeline needs at least one variant");

  const std::uint64_t generator_seed = config.seed + kGeneratorSeedOffset;
  const std::uint64_t mapper_seed = config.seed + kMapperSeedOffset;

  Workload workload;
  std::string name = config.name;
  if (config.workload_file) {
    workload = load_workload(*config.workload_file);
    if (name.empty()) name = fs::path(*config.workload_file).stem().string();
  } else {
    SynthesisParams p = *config.generator;
    p.seed = generator_seed;
    workload = in_stage("gen", [&] { return synthesize(p); });
    if (name.empty()) name = "synthetic";
  }

  const int clusters = workload.graph.cluster_count;
  const int tiles = resolve_tiles(config.tiles, clusters);
  const int lanes = resolve_lanes(config.lanes, clusters);
  const LadderTopology topo = make_topology(tiles, lanes);

  PipelineConfig pc;
  pc.mapper = config.mapper;
  pc.mapper.seed = mapper_seed;
  pc.spike_cycles = config.spike_cycles;
  pc.sim = config.sim;
  pc.sim.spike_cycles = config.spike_cycles;

  const fs::path out(config.output_dir);
  in_stage("output", [&] { fs::create_directories(out); });
  write_text_file((out / "workload.json").string(), serialize_workload(workload));
  write_text_file((out / "topology.json").string(), topology_to_json(topo).dump(2) + "\n");

  json variants = json::array();
  for (Variant v : config.variants) variants.push_back(variant_name(v));
  const json metadata = {
      {"workload", name},
      {"clusters", clusters},
      {"tiles", tiles},
      {"tiles_requested", config.tiles ? json(*config.tiles) : json(nullptr)},
      {"lanes", lanes},
      {"variants", variants},
      {"seeds",
       {{"master", config.seed},
        {"generator", config.workload_file ? json(nullptr) : json(generator_seed)},
        {"mapper", mapper_seed},
        {"generator_offset", kGeneratorSeedOffset},
        {"mapper_offset", kMapperSeedOffset}}},
      {"mapper",
       {{"restarts", pc.mapper.perturbations}, {"iterations", pc.mapper.iterations_for(topo)}}},
      {"sim", sim_config_to_json(pc.sim)}};
  write_text_file((out / "metadata.json").string(), metadata.dump(2) + "\n");

  std::map<bool, HillClimbResult> mappings;
  std::string summary = std::string(kReportCsvHeader) + "\n";
  for (Variant v : config.variants) {
    const std::string vname(variant_name(v));
    const bool energy = v == Variant::DE;
    auto it = mappings.find(energy);
    if (it == mappings.end()) {
      const MapperConfig mc = mapping_objective(v, pc.mapper);
      it = mappings
               .emplace(energy, in_stage("map", [&] { return hill_climb(workload.graph, topo, mc); }))
               .first;
    }
    const PipelineResult r =
        in_stage(vname, [&] { return run_pipeline(workload, topo, v, pc, it->second); });

    const fs::path dir = out / vname;
    fs::create_directories(dir);
    write_text_file((dir / "mapping.json").string(),
                    write_mapping({r.mapping.mapping, r.mapping.cost, r.mapper.alpha, r.mapper.beta,
                                   tiles, lanes}));
    write_text_file((dir / "schedule.json").string(), write_schedule(r.schedule));
    write_text_file((dir / "routes.json").string(), write_routes(r.routes));
    const ReportFile report{name, vname, r.report};
    write_text_file((dir / "report.json").string(), write_report(report));
    summary += report_csv_row(report) + "\n";
  }
  write_text_file((out / "summary.csv").string(), summary);
}

std::string compare_reports(std::span<const ReportFile> reports, const std::string& baseline) {
  if (reports.size() < 2) throw InputError("compare needs at least two reports");
  for (const ReportFile& r : reports) {
    if (r.workload != reports.front().workload) {
      throw InputError(fmt::format("workload mismatch: \"{}\" vs \"{}\"", reports.front().workload,
                                   r.workload));
    }
  }
  const ReportFile* base = nullptr;
  const std::string wanted = baseline.empty() ? "sl" : baseline;
  for (const ReportFile& r : reports) {
    if (r.variant == wanted) {
      base = &r;
      break;
    }
  }
  if (!base) {
    if (!baseline.empty()) {
      throw InputError(fmt::format("no report for baseline variant \"{}\"", baseline));
    }
    base = &reports.front();
  }

  const SimReport& b = base->report;
  std::string out =
      "workload,variant,baseline,received_ratio,avg_latency,energy,energy_per_spike,edp\n";
  for (const ReportFile& r : reports) {
    const SimReport& x = r.report;
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.workload, r.variant, base->variant,
                       normalized(b.spike_received_ratio, x.spike_received_ratio),
                       normalized(b.avg_latency_cycles, x.avg_latency_cycles),
                       normalized(b.total_dynamic_energy, x.total_dynamic_energy),
                       normalized(b.energy_per_spike, x.energy_per_spike),
                       normalized(b.edp, x.edp));
  }
  return out;
}

namespace {

CrossingMode parse_mode(const std::string& mode) {
  if (mode == "tx") return CrossingMode::Topological;
  if (mode == "spx") return CrossingMode::ShortestPath;
  throw InputError(fmt::format("unknown scheduling mode \"{}\"", mode));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Map, schedule, route and simulate spike traffic on a segmented ladder bus"};
  app.require_subcommand(1);

  // gen
  SynthesisParams gen;
  std::string gen_out, gen_stats;
  auto* gen_cmd = app.add_subcommand("gen", "Synthesize a bursty cluster workload");
  gen_cmd->add_option("--clusters", gen.cluster_count)->required();
  gen_cmd->add_option("--degree", gen.avg_degree)->required();
  gen_cmd->add_option("--burstiness", gen.burstiness);
  gen_cmd->add_option("--steps", gen.time_steps);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--max-spikes", gen.max_spikes);
  gen_cmd->add_option("--out", gen_out, "Workload JSON (stdout if omitted)");
  gen_cmd->add_option("--stats-csv", gen_stats, "Also write workload statistics as CSV");

  // map
  std::string map_workload, map_out;
  std::optional<int> map_tiles, map_lanes;
  MapperConfig map_cfg;
  auto* map_cmd = app.add_subcommand("map", "Hill-climbing cluster-to-tile mapping");
  map_cmd->add_option("--workload", map_workload)->required();
  map_cmd->add_option("--tiles", map_tiles);
  map_cmd->add_option("--lanes", map_lanes);
  map_cmd->add_option("--alpha", map_cfg.alpha);
  map_cmd->add_option("--beta", map_cfg.beta);
  map_cmd->add_option("--restarts", map_cfg.perturbations);
  map_cmd->add_option("--iterations", map_cfg.max_iterations, "0 = tile count");
  map_cmd->add_option("--seed", map_cfg.seed);
  map_cmd->add_option("--out", map_out);

  // schedule
  std::string sch_workload, sch_mapping, sch_mode = "tx", sch_out;
  std::optional<int> sch_tiles, sch_lanes;
  int sch_cycles = 1;
  auto* sch_cmd = app.add_subcommand("schedule", "Group simultaneous links into conflict-free slots");
  sch_cmd->add_option("--workload", sch_workload)->required();
  sch_cmd->add_option("--mapping", sch_mapping)->required();
  sch_cmd->add_option("--mode", sch_mode, "tx, spx or none")->check(CLI::IsMember({"tx", "spx", "none"}));
  sch_cmd->add_option("--spike-cycles", sch_cycles);
  sch_cmd->add_option("--tiles", sch_tiles);
  sch_cmd->add_option("--lanes", sch_lanes);
  sch_cmd->add_option("--out", sch_out);

  // route
  std::string rt_schedule, rt_out, rt_schedule_out, rt_algorithm = "sorted";
  int rt_tiles = 0, rt_lanes = 0;
  auto* rt_cmd = app.add_subcommand("route", "Route every scheduled link");
  rt_cmd->add_option("--schedule", rt_schedule)->required();
  rt_cmd->add_option("--tiles", rt_tiles)->required();
  rt_cmd->add_option("--lanes", rt_lanes)->required();
  rt_cmd->add_option("--algorithm", rt_algorithm, "sorted (weighted A* with repair) or shortest")
      ->check(CLI::IsMember({"sorted", "shortest"}));
  rt_cmd->add_option("--out", rt_out);
  rt_cmd->add_option("--schedule-out", rt_schedule_out,
                     "Where to write the schedule after route repair");

  // simulate
  std::string sim_workload, sim_mapping, sim_schedule, sim_routes, sim_config, sim_out, sim_csv;
  std::string sim_name, sim_variant = "custom";
  auto* sim_cmd = app.add_subcommand("simulate", "Replay the trace on the bus");
  sim_cmd->add_option("--workload", sim_workload)->required();
  sim_cmd->add_option("--mapping", sim_mapping)->required();
  sim_cmd->add_option("--schedule", sim_schedule)->required();
  sim_cmd->add_option("--routes", sim_routes)->required();
  sim_cmd->add_option("--config", sim_config, "Simulator config JSON");
  sim_cmd->add_option("--name", sim_name, "Workload id written into the report");
  sim_cmd->add_option("--variant", sim_variant);
  sim_cmd->add_option("--out", sim_out);
  sim_cmd->add_option("--csv", sim_csv);

  // pipeline
  std::string pl_config, pl_workload, pl_out_dir, pl_sim_config, pl_name;
  std::vector<std::string> pl_variants;
  std::optional<int> pl_clusters, pl_steps, pl_tiles, pl_lanes, pl_restarts, pl_iterations,
      pl_cycles;
  std::optional<double> pl_degree, pl_burstiness;
  std::optional<std::uint64_t> pl_seed;
  auto* pl_cmd = app.add_subcommand("pipeline", "Run the full flow for one or more variants");
  pl_cmd->add_option("--config", pl_config, "Run config JSON; flags override it");
  pl_cmd->add_option("--workload", pl_workload);
  pl_cmd->add_option("--clusters", pl_clusters);
  pl_cmd->add_option("--degree", pl_degree);
  pl_cmd->add_option("--burstiness", pl_burstiness);
  pl_cmd->add_option("--steps", pl_steps);
  pl_cmd->add_option("--tiles", pl_tiles);
  pl_cmd->add_option("--lanes", pl_lanes);
  pl_cmd->add_option("--variant", pl_variants, "sl, de, txs, spxs, sr or all (repeatable)");
  pl_cmd->add_option("--restarts", pl_restarts);
  pl_cmd->add_option("--iterations", pl_iterations);
  pl_cmd->add_option("--spike-cycles", pl_cycles);
  pl_cmd->add_option("--sim-config", pl_sim_config);
  pl_cmd->add_option("--seed", pl_seed);
  pl_cmd->add_option("--name", pl_name);
  pl_cmd->add_option("--out-dir", pl_out_dir);

  // compare
  std::vector<std::string> cmp_files;
  std::string cmp_baseline, cmp_out;
  auto* cmp_cmd = app.add_subcommand("compare", "Normalize reports against a baseline variant");
  cmp_cmd->add_option("reports", cmp_files)->required();
  cmp_cmd->add_option("--baseline", cmp_baseline);
  cmp_cmd->add_option("--out", cmp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*gen_cmd) {
      const Workload w = in_stage("gen", [&] { return synthesize(gen); });
      emit(gen_out, serialize_workload(w));
      if (!gen_stats.empty()) {
        const WorkloadStats s = stats(w.graph);
        const std::string name = gen_out.empty() ? "synthetic" : fs::path(gen_out).stem().string();
        write_text_file(gen_stats, stats_csv(std::span(&s, 1), std::span(&name, 1)));
      }
    } else if (*map_cmd) {
      const Workload w = load_workload(map_workload);
      const int clusters = w.graph.cluster_count;
      const int tiles = resolve_tiles(map_tiles, clusters);
      const int lanes = resolve_lanes(map_lanes, clusters);
      const LadderTopology topo = make_topology(tiles, lanes);
      const auto r = in_stage("map", [&] { return hill_climb(w.graph, topo, map_cfg); });
      emit(map_out, write_mapping({r.mapping, r.cost, map_cfg.alpha, map_cfg.beta, tiles, lanes}));
    } else if (*sch_cmd) {
      const Workload w = load_workload(sch_workload);
      const MappingFile m = in_stage("mapping", [&] { return read_mapping(read_text_file(sch_mapping)); });
      const int clusters = w.graph.cluster_count;
      const int tiles = sch_tiles ? *sch_tiles : resolve_tiles(m.tiles, clusters);
      const int lanes = sch_lanes ? *sch_lanes : resolve_lanes(m.lanes, clusters);
      const LadderTopology topo = make_topology(tiles, lanes);
      in_stage("mapping", [&] { m.mapping.validate(w.graph, topo); });
      const Schedule s = in_stage("schedule", [&] {
        if (sch_mode == "none") return unscheduled(w.trace, m.mapping, topo, sch_cycles);
        return schedule(w.trace, m.mapping, topo, {parse_mode(sch_mode), sch_cycles});
      });
      emit(sch_out, write_schedule(s));
    } else if (*rt_cmd) {
      const Schedule s = in_stage("schedule", [&] { return read_schedule(read_text_file(rt_schedule)); });
      const LadderTopology topo = make_topology(rt_tiles, rt_lanes);
      if (rt_algorithm == "shortest") {
        emit(rt_out, write_routes(in_stage("route", [&] { return route_shortest(topo, s); })));
        if (!rt_schedule_out.empty()) write_text_file(rt_schedule_out, write_schedule(s));
      } else {
        const auto r = in_stage("route", [&] { return route_with_repair(topo, s); });
        if (r.demoted > 0 && rt_schedule_out.empty()) {
          throw StageError(fmt::format(
              "route: repair moved {} link(s) to new groups; pass --schedule-out to keep the "
              "schedule consistent with the routes",
              r.demoted));
        }
        emit(rt_out, write_routes(r.routes));
        if (!rt_schedule_out.empty()) write_text_file(rt_schedule_out, write_schedule(r.schedule));
      }
    } else if (*sim_cmd) {
      const Workload w = load_workload(sim_workload);
      const MappingFile m = in_stage("mapping", [&] { return read_mapping(read_text_file(sim_mapping)); });
      const Schedule s = in_stage("schedule", [&] { return read_schedule(read_text_file(sim_schedule)); });
      const RouteTable rt = in_stage("routes", [&] { return read_routes(read_text_file(sim_routes)); });
      SimConfig cfg;
      cfg.spike_cycles = s.spike_cycles;
      if (!sim_config.empty()) {
        cfg = in_stage("config", [&] { return sim_config_from_json(json::parse(read_text_file(sim_config))); });
      }
      const int clusters = w.graph.cluster_count;
      const LadderTopology topo =
          make_topology(resolve_tiles(m.tiles, clusters), resolve_lanes(m.lanes, clusters));
      in_stage("mapping", [&] { m.mapping.validate(w.graph, topo); });
      const SimReport r = in_stage("simulate", [&] { return simulate(topo, w.trace, m.mapping, s, rt, cfg); });
      const std::string name = sim_name.empty() ? fs::path(sim_workload).stem().string() : sim_name;
      const ReportFile file{name, sim_variant, r};
      emit(sim_out, write_report(file));
      if (!sim_csv.empty()) {
        write_text_file(sim_csv, std::string(kReportCsvHeader) + "\n" + report_csv_row(file) + "\n");
      }
    } else if (*pl_cmd) {
      RunConfig rc;
      if (!pl_config.empty()) {
        rc = in_stage("config", [&] { return parse_run_config(json::parse(read_text_file(pl_config))); });
      }
      if (!pl_workload.empty()) {
        rc.workload_file = pl_workload;
        rc.generator.reset();
      } else if (pl_clusters || pl_degree) {
        SynthesisParams p = rc.generator.value_or(SynthesisParams{});
        if (pl_clusters) p.cluster_count = *pl_clusters;
        if (pl_degree) p.avg_degree = *pl_degree;
        rc.generator = p;
        rc.workload_file.reset();
      }
      if (rc.generator) {
        if (pl_burstiness) rc.generator->burstiness = *pl_burstiness;
        if (pl_steps) rc.generator->time_steps = *pl_steps;
      }
      if (pl_tiles) rc.tiles = pl_tiles;
      if (pl_lanes) rc.lanes = pl_lanes;
      if (pl_restarts) rc.mapper.perturbations = *pl_restarts;
      if (pl_iterations) rc.mapper.max_iterations = *pl_iterations;
      if (pl_cycles) rc.spike_cycles = *pl_cycles;
      if (!pl_sim_config.empty()) {
        rc.sim = in_stage("config", [&] { return sim_config_from_json(json::parse(read_text_file(pl_sim_config))); });
      }
      if (pl_seed) rc.seed = *pl_seed;
      if (!pl_name.empty()) rc.name = pl_name;
      if (!pl_out_dir.empty()) rc.output_dir = pl_out_dir;
      if (!pl_variants.empty()) {
        rc.variants.clear();
        for (const std::string& v : pl_variants) {
          if (v == "all") {
            rc.variants.assign(kAllVariants.begin(), kAllVariants.end());
          } else {
            rc.variants.push_back(parse_variant(v));
          }
        }
      }
      run_configured_pipeline(rc);
    } else if (*cmp_cmd) {
      std::vector<ReportFile> reports;
      for (const std::string& f : cmp_files) {
        reports.push_back(in_stage("compare", [&] { return read_report(read_text_file(f)); }));
      }
      emit(cmp_out, compare_reports(reports, cmp_baseline));
    }
  } catch (const BudgetOverflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudgetOverflow;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "stage failure: " << e.what() << "\n";
    return kExitStageFailure;
  }
  return kExitOk;
}

}  // namespace ladder

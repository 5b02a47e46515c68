#include "ladder/artifacts.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ladder/errors.hpp"

namespace ladder {

using nlohmann::json;

namespace {

json parse_text(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("{} is not valid JSON: {}", what, e.what()));
  }
}

const json& field(const json& obj, const char* name, const char* where) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw InputError(fmt::format("{}: missing field \"{}\"", where, name));
  }
  return obj.at(name);
}

std::int64_t int_field(const json& obj, const char* name, const char* where) {
  const json& v = field(obj, name, where);
  if (!v.is_number_integer()) {
    throw InputError(fmt::format("{}: field \"{}\" must be an integer", where, name));
  }
  return v.get<std::int64_t>();
}

double real_field(const json& obj, const char* name, const char* where) {
  const json& v = field(obj, name, where);
  if (!v.is_number()) throw InputError(fmt::format("{}: field \"{}\" must be a number", where, name));
  return v.get<double>();
}

const json& array_field(const json& obj, const char* name, const char* where) {
  const json& v = field(obj, name, where);
  if (!v.is_array()) throw InputError(fmt::format("{}: field \"{}\" must be an array", where, name));
  return v;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

json topology_to_json(const LadderTopology& topo) {
  json tiles = json::array();
  for (TileId t = 0; t < topo.tile_count(); ++t) tiles.push_back(t);
  json switches = json::array();
  for (int lane = 0; lane < topo.lane_count(); ++lane) {
    for (int col = 0; col < topo.column_count(); ++col) switches.push_back({lane, col});
  }
  json edges = json::array();
  for (const Edge& e : topo.edges()) edges.push_back({e.a.index, e.b.index});
  return {{"tiles", tiles}, {"switches", switches}, {"edges", edges}};
}

std::string write_mapping(const MappingFile& file) {
  json m = json::object();
  for (ClusterId c = 0; c < file.mapping.cluster_count(); ++c) {
    m[std::to_string(c)] = file.mapping.tile(c);
  }
  json doc = {{"mapping", m}, {"cost", file.cost}, {"alpha", file.alpha}, {"beta", file.beta}};
  if (file.tiles) doc["tiles"] = *file.tiles;
  if (file.lanes) doc["lanes"] = *file.lanes;
  return dump(doc);
}

MappingFile read_mapping(std::string_view text) {
  const json doc = parse_text(text, "mapping file");
  const json& m = field(doc, "mapping", "mapping file");
  if (!m.is_object()) throw InputError("mapping file: \"mapping\" must be an object");

  std::vector<TileId> tiles(m.size(), -1);
  for (const auto& [key, value] : m.items()) {
    std::size_t used = 0;
    long cluster = -1;
    try {
      cluster = std::stol(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || cluster < 0 || static_cast<std::size_t>(cluster) >= tiles.size()) {
      throw InputError(fmt::format("mapping file: bad cluster key \"{}\"", key));
    }
    if (!value.is_number_integer()) {
      throw InputError(fmt::format("mapping file: tile for cluster {} must be an integer", key));
    }
    tiles[static_cast<std::size_t>(cluster)] = value.get<TileId>();
  }

  MappingFile file;
  file.mapping = Mapping(std::move(tiles));
  file.cost = real_field(doc, "cost", "mapping file");
  file.alpha = real_field(doc, "alpha", "mapping file");
  file.beta = real_field(doc, "beta", "mapping file");
  if (doc.contains("tiles")) file.tiles = static_cast<int>(int_field(doc, "tiles", "mapping file"));
  if (doc.contains("lanes")) file.lanes = static_cast<int>(int_field(doc, "lanes", "mapping file"));
  return file;
}

std::string write_schedule(const Schedule& schedule) {
  json steps = json::array();
  for (const StepSchedule& step : schedule.steps) {
    json groups = json::array();
    for (const Group& g : step.groups) {
      json links = json::array();
      for (const ScheduledLink& l : g.links) {
        links.push_back({{"src", l.link.src}, {"dst", l.link.dst}, {"spikes", l.spikes}});
      }
      groups.push_back({{"offset", g.cycle_offset}, {"links", links}});
    }
    steps.push_back({{"t", step.t}, {"groups", groups}});
  }
  return dump({{"spike_cycles", schedule.spike_cycles}, {"steps", steps}});
}

Schedule read_schedule(std::string_view text) {
  const json doc = parse_text(text, "schedule file");
  Schedule schedule;
  if (doc.contains("spike_cycles")) {
    schedule.spike_cycles = static_cast<int>(int_field(doc, "spike_cycles", "schedule"));
  }
  for (const json& step : array_field(doc, "steps", "schedule")) {
    StepSchedule& s = schedule.steps.emplace_back();
    s.t = int_field(step, "t", "schedule step");
    for (const json& group : array_field(step, "groups", "schedule step")) {
      Group& g = s.groups.emplace_back();
      g.cycle_offset = int_field(group, "offset", "schedule group");
      for (const json& link : array_field(group, "links", "schedule group")) {
        g.links.push_back({{static_cast<TileId>(int_field(link, "src", "schedule link")),
                            static_cast<TileId>(int_field(link, "dst", "schedule link"))},
                           int_field(link, "spikes", "schedule link")});
      }
    }
  }
  return schedule;
}

std::string write_routes(const RouteTable& routes) {
  json steps = json::array();
  for (const RoutedStep& step : routes.steps) {
    json groups = json::array();
    for (const RoutedGroup& g : step.groups) {
      json list = json::array();
      for (const Route& r : g.routes) {
        json path = json::array();
        for (NodeId v : r.path) path.push_back(v.index);
        list.push_back({{"src", r.link.src}, {"dst", r.link.dst}, {"path", path}});
      }
      groups.push_back({{"offset", g.cycle_offset}, {"routes", list}});
    }
    steps.push_back({{"t", step.t}, {"groups", groups}});
  }
  return dump({{"steps", steps}});
}

RouteTable read_routes(std::string_view text) {
  const json doc = parse_text(text, "route file");
  RouteTable table;
  for (const json& step : array_field(doc, "steps", "routes")) {
    RoutedStep& s = table.steps.emplace_back();
    s.t = int_field(step, "t", "route step");
    for (const json& group : array_field(step, "groups", "route step")) {
      RoutedGroup& g = s.groups.emplace_back();
      g.cycle_offset = int_field(group, "offset", "route group");
      for (const json& r : array_field(group, "routes", "route group")) {
        Route& route = g.routes.emplace_back();
        route.link = {static_cast<TileId>(int_field(r, "src", "route")),
                      static_cast<TileId>(int_field(r, "dst", "route"))};
        for (const json& v : array_field(r, "path", "route")) {
          if (!v.is_number_integer()) throw InputError("route: path entries must be integers");
          route.path.push_back(NodeId{v.get<std::int32_t>()});
        }
      }
    }
  }
  return table;
}

SimConfig sim_config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("simulator config must be an object");
  SimConfig c;
  if (j.contains("spike_cycles")) c.spike_cycles = static_cast<int>(int_field(j, "spike_cycles", "sim config"));
  if (j.contains("energy_per_segment")) c.energy_per_segment = real_field(j, "energy_per_segment", "sim config");
  if (j.contains("energy_per_switch_config")) {
    c.energy_per_switch_config = real_field(j, "energy_per_switch_config", "sim config");
  }
  if (j.contains("cycles_per_time_step")) {
    c.cycles_per_time_step = int_field(j, "cycles_per_time_step", "sim config");
  }
  c.validate();
  return c;
}

json sim_config_to_json(const SimConfig& c) {
  return {{"spike_cycles", c.spike_cycles},
          {"energy_per_segment", c.energy_per_segment},
          {"energy_per_switch_config", c.energy_per_switch_config},
          {"cycles_per_time_step", c.cycles_per_time_step}};
}

std::string write_report(const ReportFile& file) {
  const SimReport& r = file.report;
  json steps = json::array();
  for (const StepReport& s : r.steps) {
    steps.push_back({{"t", s.t},
                     {"offered", s.offered},
                     {"delivered", s.delivered},
                     {"dropped", s.dropped},
                     {"makespan", s.makespan},
                     {"energy", s.energy}});
  }
  json doc = {{"workload", file.workload},
              {"variant", file.variant},
              {"spikes_offered", r.spikes_offered},
              {"spikes_delivered", r.spikes_delivered},
              {"spikes_dropped", r.spikes_dropped},
              {"spike_received_ratio", r.spike_received_ratio},
              {"avg_latency_cycles", r.avg_latency_cycles},
              {"total_dynamic_energy", r.total_dynamic_energy},
              {"energy_per_spike", r.energy_per_spike ? json(*r.energy_per_spike) : json(nullptr)},
              {"edp", r.edp},
              {"segment_traversals", r.segment_traversals},
              {"switch_reconfigurations", r.switch_reconfigurations},
              {"steps", steps}};
  return dump(doc);
}

ReportFile read_report(std::string_view text) {
  const json doc = parse_text(text, "report file");
  ReportFile file;
  const json& w = field(doc, "workload", "report");
  const json& v = field(doc, "variant", "report");
  if (!w.is_string() || !v.is_string()) throw InputError("report: workload and variant must be strings");
  file.workload = w.get<std::string>();
  file.variant = v.get<std::string>();
  SimReport& r = file.report;
  r.spikes_offered = int_field(doc, "spikes_offered", "report");
  r.spikes_delivered = int_field(doc, "spikes_delivered", "report");
  r.spikes_dropped = int_field(doc, "spikes_dropped", "report");
  r.spike_received_ratio = real_field(doc, "spike_received_ratio", "report");
  r.avg_latency_cycles = real_field(doc, "avg_latency_cycles", "report");
  r.total_dynamic_energy = real_field(doc, "total_dynamic_energy", "report");
  const json& eps = field(doc, "energy_per_spike", "report");
  if (!eps.is_null()) r.energy_per_spike = real_field(doc, "energy_per_spike", "report");
  r.edp = real_field(doc, "edp", "report");
  if (doc.contains("segment_traversals")) r.segment_traversals = int_field(doc, "segment_traversals", "report");
  if (doc.contains("switch_reconfigurations")) {
    r.switch_reconfigurations = int_field(doc, "switch_reconfigurations", "report");
  }
  if (doc.contains("steps")) {
    for (const json& s : array_field(doc, "steps", "report")) {
      r.steps.push_back({int_field(s, "t", "report step"), int_field(s, "offered", "report step"),
                         int_field(s, "delivered", "report step"),
                         int_field(s, "dropped", "report step"),
                         int_field(s, "makespan", "report step"),
                         real_field(s, "energy", "report step")});
    }
  }
  return file;
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{}", x);
}

std::string report_csv_row(const ReportFile& file) {
  const SimReport& r = file.report;
  return fmt::format("{},{},{},{},{},{},{},{},{},{}", file.workload, file.variant,
                     r.spikes_offered, r.spikes_delivered, r.spikes_dropped,
                     format_real(r.spike_received_ratio), format_real(r.avg_latency_cycles),
                     format_real(r.total_dynamic_energy),
                     r.energy_per_spike ? format_real(*r.energy_per_spike) : std::string(),
                     format_real(r.edp));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StageError(fmt::format("cannot write {}", path));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw StageError(fmt::format("failed writing {}", path));
}

}  // namespace ladder

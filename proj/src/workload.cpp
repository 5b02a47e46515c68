#include "ladder/workload.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "ladder/errors.hpp"
#include "ladder/random.hpp"

namespace ladder {

using nlohmann::json;

std::vector<std::span<const SpikeEvent>> SpikeTrace::steps() const {
  std::vector<std::span<const SpikeEvent>> out;
  std::size_t begin = 0;
  while (begin < events.size()) {
    std::size_t end = begin;
    while (end < events.size() && events[end].t == events[begin].t) ++end;
    out.emplace_back(events.data() + begin, end - begin);
    begin = end;
  }
  return out;
}

Workload make_workload(int cluster_count, std::vector<SpikeEvent> events) {
  if (cluster_count < 1) {
    throw InputError(fmt::format("cluster count must be >= 1, got {}", cluster_count));
  }
  for (const SpikeEvent& e : events) {
    if (e.src < 0 || e.src >= cluster_count || e.dst < 0 || e.dst >= cluster_count) {
      throw InputError(fmt::format("event at t={} references cluster outside [0, {})", e.t,
                                   cluster_count));
    }
    if (e.src == e.dst) {
      throw InputError(fmt::format("self-link {}->{} at t={}", e.src, e.dst, e.t));
    }
    if (e.t < 0) throw InputError(fmt::format("negative time step {}", e.t));
    if (e.spikes <= 0) {
      throw InputError(fmt::format("non-positive spike count {} on {}->{} at t={}", e.spikes,
                                   e.src, e.dst, e.t));
    }
  }

  const auto key = [](const SpikeEvent& e) { return std::tie(e.t, e.src, e.dst); };
  std::sort(events.begin(), events.end(),
            [&](const SpikeEvent& a, const SpikeEvent& b) { return key(a) < key(b); });
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (key(events[i - 1]) == key(events[i])) {
      throw InputError(fmt::format("duplicate event key t={} {}->{}", events[i].t, events[i].src,
                                   events[i].dst));
    }
  }

  std::map<std::pair<ClusterId, ClusterId>, std::int64_t> totals;
  for (const SpikeEvent& e : events) totals[{e.src, e.dst}] += e.spikes;

  Workload w;
  w.graph.cluster_count = cluster_count;
  w.graph.links.reserve(totals.size());
  for (const auto& [pair, spikes] : totals) {
    w.graph.links.push_back({pair.first, pair.second, spikes});
  }
  w.trace.events = std::move(events);
  return w;
}

namespace {

std::int64_t require_int(const json& obj, const char* field, const char* where) {
  if (!obj.is_object() || !obj.contains(field)) {
    throw InputError(fmt::format("{}: missing field \"{}\"", where, field));
  }
  const json& v = obj.at(field);
  if (!v.is_number_integer()) {
    throw InputError(fmt::format("{}: field \"{}\" must be an integer", where, field));
  }
  return v.get<std::int64_t>();
}

}  // namespace

Workload parse_workload(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("workload is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw InputError("workload: top level must be an object");
  const auto clusters = require_int(doc, "clusters", "workload");
  if (!doc.contains("events") || !doc.at("events").is_array()) {
    throw InputError("workload: \"events\" must be an array");
  }

  std::vector<SpikeEvent> events;
  events.reserve(doc.at("events").size());
  for (const json& e : doc.at("events")) {
    events.push_back({require_int(e, "t", "event"),
                      static_cast<ClusterId>(require_int(e, "src", "event")),
                      static_cast<ClusterId>(require_int(e, "dst", "event")),
                      require_int(e, "spikes", "event")});
  }
  return make_workload(static_cast<int>(clusters), std::move(events));
}

std::string serialize_workload(const Workload& workload) {
  json events = json::array();
  for (const SpikeEvent& e : workload.trace.events) {
    events.push_back({{"t", e.t}, {"src", e.src}, {"dst", e.dst}, {"spikes", e.spikes}});
  }
  json doc = {{"clusters", workload.graph.cluster_count}, {"events", std::move(events)}};
  return doc.dump(2) + "\n";
}

int ceil_sqrt(int n) {
  int k = 0;
  while (k * k < n) ++k;
  return k;
}

WorkloadStats stats(const ClusterGraph& graph) {
  const int c = graph.cluster_count;
  if (c < 2) throw InputError("density is undefined for fewer than two clusters");
  WorkloadStats s;
  s.cluster_count = c;
  s.link_count = static_cast<int>(graph.links.size());
  s.avg_degree = static_cast<double>(s.link_count) / c;
  s.density = 2.0 * s.link_count / (static_cast<double>(c) * (c - 1));
  s.suggested_lanes = ceil_sqrt(c);
  return s;
}

std::string stats_csv(std::span<const WorkloadStats> rows, std::span<const std::string> names) {
  std::string out = "workload,clusters,links,avg_degree,density,suggested_lanes\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const WorkloadStats& s = rows[i];
    out += fmt::format("{},{},{},{:.4f},{:.4f},{}\n", i < names.size() ? names[i] : "",
                       s.cluster_count, s.link_count, s.avg_degree, s.density,
                       s.suggested_lanes);
  }
  return out;
}

Workload synthesize(const SynthesisParams& p) {
  const int c = p.cluster_count;
  if (c < 2) throw InputError("synthesis needs at least two clusters");
  if (!(p.avg_degree >= 0.0) || p.avg_degree > c - 1) {
    throw InputError(fmt::format("infeasible degree target {} for {} clusters", p.avg_degree, c));
  }
  if (!(p.burstiness >= 0.0 && p.burstiness <= 1.0)) {
    throw InputError("burstiness must lie in [0, 1]");
  }
  if (p.time_steps < 1) throw InputError("time_steps must be >= 1");
  if (p.max_spikes < 1) throw InputError("max_spikes must be >= 1");

  const auto link_count = static_cast<std::size_t>(std::llround(p.avg_degree * c));
  Rng rng(p.seed);

  std::vector<std::pair<ClusterId, ClusterId>> pairs;
  pairs.reserve(static_cast<std::size_t>(c) * (c - 1));
  for (ClusterId i = 0; i < c; ++i) {
    for (ClusterId j = 0; j < c; ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  rng.shuffle(pairs);
  pairs.resize(link_count);
  std::sort(pairs.begin(), pairs.end());

  std::vector<SpikeEvent> events;
  if (link_count > 0) {
    const auto per_step = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(p.burstiness * static_cast<double>(link_count))), 1,
        link_count);
    std::vector<bool> fired(link_count, false);
    std::vector<std::size_t> order(link_count);
    for (std::size_t i = 0; i < link_count; ++i) order[i] = i;

    for (int t = 0; t < p.time_steps; ++t) {
      // Partial Fisher-Yates: the first per_step entries become the burst.
      for (std::size_t k = 0; k < per_step; ++k) {
        std::swap(order[k], order[k + rng.below(link_count - k)]);
        const auto& [src, dst] = pairs[order[k]];
        fired[order[k]] = true;
        events.push_back({t, src, dst, rng.between(1, p.max_spikes)});
      }
    }
    for (std::size_t i = 0; i < link_count; ++i) {
      if (fired[i]) continue;
      const auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p.time_steps)));
      events.push_back({t, pairs[i].first, pairs[i].second, rng.between(1, p.max_spikes)});
    }
  }
  return make_workload(c, std::move(events));
}

}  // namespace ladder

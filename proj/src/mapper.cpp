#include "ladder/mapper.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "ladder/errors.hpp"
#include "ladder/random.hpp"

namespace ladder {

namespace {

void require_full(const ClusterGraph& graph, const Mapping& mapping) {
  if (mapping.cluster_count() != graph.cluster_count) {
    throw InputError(fmt::format("mapping covers {} clusters, graph has {}",
                                 mapping.cluster_count(), graph.cluster_count));
  }
}

}  // namespace

TileId Mapping::tile(ClusterId c) const {
  if (c < 0 || c >= cluster_count()) {
    throw InputError(fmt::format("cluster {} is not mapped", c));
  }
  return tiles_[static_cast<std::size_t>(c)];
}

void Mapping::validate(const ClusterGraph& graph, const LadderTopology& topo) const {
  if (cluster_count() < graph.cluster_count) {
    throw InputError(fmt::format("mapping covers {} clusters, workload has {}", cluster_count(),
                                 graph.cluster_count));
  }
  std::vector<bool> used(static_cast<std::size_t>(topo.tile_count()), false);
  for (ClusterId c = 0; c < cluster_count(); ++c) {
    const TileId t = tiles_[static_cast<std::size_t>(c)];
    if (!topo.valid_tile(t)) {
      throw InputError(fmt::format("cluster {} mapped to invalid tile {}", c, t));
    }
    if (used[static_cast<std::size_t>(t)]) {
      throw InputError(fmt::format("tile {} assigned to more than one cluster", t));
    }
    used[static_cast<std::size_t>(t)] = true;
  }
}

void MapperConfig::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha + beta > 0.0)) {
    throw InputError("mapper weights must be non-negative with alpha + beta > 0");
  }
  if (perturbations < 1) throw InputError("perturbation count must be >= 1");
  if (max_iterations < 0) throw InputError("max_iterations must be >= 0");
}

std::int64_t cost_energy(const ClusterGraph& graph, const Mapping& mapping,
                         const LadderTopology& topo) {
  require_full(graph, mapping);
  std::int64_t total = 0;
  for (const ClusterLink& link : graph.links) {
    total += link.spikes * topo.distance(mapping.tile(link.src), mapping.tile(link.dst));
  }
  return total;
}

std::int64_t cost_crossing(const ClusterGraph& graph, const Mapping& mapping,
                           const LadderTopology& topo) {
  require_full(graph, mapping);
  std::vector<LinkEndpoints> ends;
  std::vector<std::int64_t> spikes;
  for (const ClusterLink& link : graph.links) {
    if (link.spikes <= 0) continue;
    ends.push_back(mapping.endpoints(link.src, link.dst));
    spikes.push_back(link.spikes);
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      if (topological_cross(topo, ends[i], ends[j])) total += spikes[i] + spikes[j];
    }
  }
  return total;
}

double cost(const ClusterGraph& graph, const Mapping& mapping, const LadderTopology& topo,
            const MapperConfig& config) {
  double total = 0.0;
  if (config.alpha != 0.0) {
    total += config.alpha * static_cast<double>(cost_energy(graph, mapping, topo));
  }
  if (config.beta != 0.0) {
    total += config.beta * static_cast<double>(cost_crossing(graph, mapping, topo));
  }
  return total;
}

Mapping random_mapping(int cluster_count, const LadderTopology& topo, std::uint64_t seed) {
  if (cluster_count > topo.tile_count()) {
    throw InputError(fmt::format("{} clusters do not fit on {} tiles", cluster_count,
                                 topo.tile_count()));
  }
  std::vector<TileId> tiles(static_cast<std::size_t>(topo.tile_count()));
  for (TileId t = 0; t < topo.tile_count(); ++t) tiles[static_cast<std::size_t>(t)] = t;
  Rng rng(seed);
  rng.shuffle(tiles);
  tiles.resize(static_cast<std::size_t>(cluster_count));
  return Mapping(std::move(tiles));
}

namespace {

void check_fits(const ClusterGraph& graph, const LadderTopology& topo) {
  if (graph.cluster_count > topo.tile_count()) {
    throw InputError(fmt::format("{} clusters do not fit on {} tiles", graph.cluster_count,
                                 topo.tile_count()));
  }
}

struct Span {
  int lo;
  int hi;
};

// Incremental cost state for swap moves.
//
// Links sharing a cluster always share a tile, and links sharing a tile never
// strictly interleave, so the crossing cost splits into a mapping-independent
// shared-endpoint part plus an interleaving part. The interleaving part is
// queried through 2D prefix sums over (lo, hi) column spans.
class SwapEvaluator {
public:
  SwapEvaluator(const ClusterGraph& graph, const LadderTopology& topo, const MapperConfig& config)
      : graph_(graph),
        topo_(topo),
        alpha_(config.alpha),
        beta_(config.beta),
        columns_(topo.column_count()),
        incident_(static_cast<std::size_t>(graph.cluster_count)),
        stamp_(graph.links.size(), 0),
        count_(static_cast<std::size_t>((columns_ + 1) * (columns_ + 1)), 0),
        sum_(count_.size(), 0),
        fen_count_(static_cast<std::size_t>(columns_ + 1), 0),
        fen_sum_(static_cast<std::size_t>(columns_ + 1), 0) {
    for (std::size_t i = 0; i < graph.links.size(); ++i) {
      incident_[static_cast<std::size_t>(graph.links[i].src)].push_back(i);
      incident_[static_cast<std::size_t>(graph.links[i].dst)].push_back(i);
    }
    if (beta_ != 0.0) shared_ = shared_endpoint_weight();
    const int tiles = topo.tile_count();
    for (TileId s = 0; s < tiles; ++s) {
      column_of_.push_back(topo.column(s));
      for (TileId t = 0; t < tiles; ++t) distance_.push_back(topo.distance(s, t));
    }
  }

  void reset(const Mapping& mapping) {
    tile_of_ = mapping.tiles();
    occupant_.assign(static_cast<std::size_t>(topo_.tile_count()), -1);
    for (ClusterId c = 0; c < static_cast<ClusterId>(tile_of_.size()); ++c) {
      occupant_[static_cast<std::size_t>(tile_of_[static_cast<std::size_t>(c)])] = c;
    }
    spans_.resize(graph_.links.size());
    energy_ = 0;
    for (std::size_t i = 0; i < graph_.links.size(); ++i) {
      const ClusterLink& l = graph_.links[i];
      spans_[i] = span_of(tile(l.src), tile(l.dst));
      energy_ += l.spikes * dist(tile(l.src), tile(l.dst));
    }
    interleave_ = 0;
    if (beta_ != 0.0) {
      rebuild_tables();
      std::int64_t doubled = 0;
      for (std::size_t i = 0; i < graph_.links.size(); ++i) {
        doubled += query(spans_[i], graph_.links[i].spikes);
      }
      interleave_ = doubled / 2;
    }
  }

  double cost() const {
    return alpha_ * static_cast<double>(energy_) +
           beta_ * static_cast<double>(interleave_ + shared_);
  }
  std::int64_t energy() const { return energy_; }
  std::int64_t crossing() const { return interleave_ + shared_; }
  Mapping mapping() const { return Mapping(tile_of_); }
  TileId tile(ClusterId c) const { return tile_of_[static_cast<std::size_t>(c)]; }
  ClusterId occupant(TileId t) const { return occupant_[static_cast<std::size_t>(t)]; }

  struct Delta {
    std::int64_t energy = 0;
    std::int64_t crossing = 0;
  };

  // Change in (E, W) from moving cluster `a` onto tile `target`; whatever
  // occupies `target` moves to a's tile.
  Delta evaluate(ClusterId a, TileId target) {
    const TileId from = tile(a);
    const ClusterId b = occupant(target);
    collect_affected(a, b);

    const auto moved = [&](ClusterId c) {
      if (c == a) return target;
      if (c == b) return from;
      return tile(c);
    };

    Delta d;
    new_spans_.resize(affected_.size());
    for (std::size_t k = 0; k < affected_.size(); ++k) {
      const ClusterLink& l = graph_.links[affected_[k]];
      const TileId s = moved(l.src);
      const TileId t = moved(l.dst);
      new_spans_[k] = span_of(s, t);
      if (alpha_ != 0.0) d.energy += l.spikes * (dist(s, t) - dist(tile(l.src), tile(l.dst)));
    }
    if (beta_ == 0.0) return d;

    // Table queries see the affected links at their old spans. Undo the
    // new-vs-old pairs they pick up and add the pairs inside each side.
    old_items_.clear();
    new_items_.clear();
    for (std::size_t k = 0; k < affected_.size(); ++k) {
      const std::int64_t sp = graph_.links[affected_[k]].spikes;
      const Span before = spans_[affected_[k]];
      d.crossing += query(new_spans_[k], sp) - query(before, sp);
      old_items_.push_back({before, sp});
      new_items_.push_back({new_spans_[k], sp});
    }
    const auto by_lo = [](const Item& x, const Item& y) { return x.span.lo < y.span.lo; };
    std::sort(old_items_.begin(), old_items_.end(), by_lo);
    std::sort(new_items_.begin(), new_items_.end(), by_lo);
    d.crossing += nested_sweep(old_items_, old_items_) + nested_sweep(new_items_, new_items_) -
                  nested_sweep(old_items_, new_items_) - nested_sweep(new_items_, old_items_);
    return d;
  }

  void apply(ClusterId a, TileId target, Delta d) {
    const TileId from = tile(a);
    const ClusterId b = occupant(target);
    tile_of_[static_cast<std::size_t>(a)] = target;
    occupant_[static_cast<std::size_t>(target)] = a;
    occupant_[static_cast<std::size_t>(from)] = b;
    if (b >= 0) tile_of_[static_cast<std::size_t>(b)] = from;
    collect_affected(a, b);
    for (std::size_t i : affected_) {
      const ClusterLink& l = graph_.links[i];
      spans_[i] = span_of(tile(l.src), tile(l.dst));
    }
    // The delta's energy part is skipped when alpha is 0.
    std::int64_t energy = 0;
    for (std::size_t i = 0; i < graph_.links.size(); ++i) {
      const ClusterLink& l = graph_.links[i];
      energy += l.spikes * dist(tile(l.src), tile(l.dst));
    }
    energy_ = energy;
    interleave_ += d.crossing;
    if (beta_ != 0.0) rebuild_tables();
  }

  double weigh(Delta d) const {
    return alpha_ * static_cast<double>(d.energy) + beta_ * static_cast<double>(d.crossing);
  }

private:
  Span span_of(TileId s, TileId t) const {
    const int x = column_of_[static_cast<std::size_t>(s)];
    const int y = column_of_[static_cast<std::size_t>(t)];
    return {std::min(x, y), std::max(x, y)};
  }

  std::int64_t dist(TileId s, TileId t) const {
    return distance_[static_cast<std::size_t>(s * topo_.tile_count() + t)];
  }

  std::size_t at(int lo, int hi) const {
    return static_cast<std::size_t>(lo * (columns_ + 1) + hi);
  }

  void rebuild_tables() {
    std::fill(count_.begin(), count_.end(), 0);
    std::fill(sum_.begin(), sum_.end(), 0);
    for (std::size_t i = 0; i < spans_.size(); ++i) {
      count_[at(spans_[i].lo + 1, spans_[i].hi + 1)] += 1;
      sum_[at(spans_[i].lo + 1, spans_[i].hi + 1)] += graph_.links[i].spikes;
    }
    for (int lo = 1; lo <= columns_; ++lo) {
      for (int hi = 1; hi <= columns_; ++hi) {
        const std::size_t here = at(lo, hi);
        const std::size_t up = at(lo - 1, hi);
        const std::size_t left = at(lo, hi - 1);
        const std::size_t diag = at(lo - 1, hi - 1);
        count_[here] += count_[up] + count_[left] - count_[diag];
        sum_[here] += sum_[up] + sum_[left] - sum_[diag];
      }
    }
  }

  // Links with lo in [lo0, lo1] and hi in [hi0, hi1]: (count, spike sum).
  std::pair<std::int64_t, std::int64_t> rect(int lo0, int lo1, int hi0, int hi1) const {
    if (lo0 > lo1 || hi0 > hi1) return {0, 0};
    const auto pick = [&](const std::vector<std::int64_t>& p) {
      return p[at(lo1 + 1, hi1 + 1)] - p[at(lo0, hi1 + 1)] - p[at(lo1 + 1, hi0)] +
             p[at(lo0, hi0)];
    };
    return {pick(count_), pick(sum_)};
  }

  // Weighted interleaving of a span against every link in the tables.
  std::int64_t query(Span s, std::int64_t spikes) const {
    const auto [n1, s1] = rect(s.lo + 1, s.hi - 1, s.hi + 1, columns_ - 1);
    const auto [n2, s2] = rect(0, s.lo - 1, s.lo + 1, s.hi - 1);
    return spikes * (n1 + n2) + s1 + s2;
  }

  struct Item {
    Span span;
    std::int64_t spikes;
  };

  // Weighted pairs (x, y) with x.lo < y.lo < x.hi < y.hi; both inputs sorted
  // by lo. Uses a Fenwick tree over hi, emptied again before returning.
  std::int64_t nested_sweep(const std::vector<Item>& xs, const std::vector<Item>& ys) {
    const auto add = [&](int hi, std::int64_t c, std::int64_t w) {
      for (int i = hi + 1; i <= columns_; i += i & -i) {
        fen_count_[static_cast<std::size_t>(i)] += c;
        fen_sum_[static_cast<std::size_t>(i)] += w;
      }
    };
    const auto prefix = [&](int hi) {  // entries with hi' <= hi
      std::int64_t c = 0, w = 0;
      for (int i = hi + 1; i > 0; i -= i & -i) {
        c += fen_count_[static_cast<std::size_t>(i)];
        w += fen_sum_[static_cast<std::size_t>(i)];
      }
      return std::pair{c, w};
    };
    std::int64_t total = 0;
    std::size_t inserted = 0;
    for (const Item& y : ys) {
      while (inserted < xs.size() && xs[inserted].span.lo < y.span.lo) {
        add(xs[inserted].span.hi, 1, xs[inserted].spikes);
        ++inserted;
      }
      if (y.span.hi - y.span.lo < 2) continue;
      const auto [c1, w1] = prefix(y.span.hi - 1);
      const auto [c0, w0] = prefix(y.span.lo);
      total += (c1 - c0) * y.spikes + (w1 - w0);
    }
    for (std::size_t i = 0; i < inserted; ++i) add(xs[i].span.hi, -1, -xs[i].spikes);
    return total;
  }

  void collect_affected(ClusterId a, ClusterId b) {
    ++generation_;
    affected_.clear();
    for (ClusterId c : {a, b}) {
      if (c < 0) continue;
      for (std::size_t i : incident_[static_cast<std::size_t>(c)]) {
        if (stamp_[i] == generation_) continue;
        stamp_[i] = generation_;
        affected_.push_back(i);
      }
    }
  }

  std::int64_t shared_endpoint_weight() const {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& list : incident_) {
      for (std::size_t x = 0; x < list.size(); ++x) {
        for (std::size_t y = x + 1; y < list.size(); ++y) {
          pairs.emplace_back(std::min(list[x], list[y]), std::max(list[x], list[y]));
        }
      }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::int64_t total = 0;
    for (const auto& [x, y] : pairs) total += graph_.links[x].spikes + graph_.links[y].spikes;
    return total;
  }

  const ClusterGraph& graph_;
  const LadderTopology& topo_;
  double alpha_;
  double beta_;
  int columns_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t generation_ = 0;
  std::vector<std::size_t> affected_;
  std::vector<Span> new_spans_;
  std::vector<Item> old_items_;
  std::vector<Item> new_items_;

  std::vector<TileId> tile_of_;
  std::vector<ClusterId> occupant_;
  std::vector<Span> spans_;
  std::vector<std::int64_t> count_;
  std::vector<std::int64_t> sum_;
  std::vector<std::int64_t> fen_count_;
  std::vector<std::int64_t> fen_sum_;
  std::vector<int> column_of_;
  std::vector<std::int64_t> distance_;
  std::int64_t energy_ = 0;
  std::int64_t interleave_ = 0;
  std::int64_t shared_ = 0;
};

}  // namespace

HillClimbResult hill_climb(const ClusterGraph& graph, const LadderTopology& topo,
                           const MapperConfig& config) {
  config.validate();
  check_fits(graph, topo);
  const int clusters = graph.cluster_count;
  const int iterations = config.iterations_for(topo);

  SwapEvaluator state(graph, topo, config);
  HillClimbResult result;
  state.reset(random_mapping(clusters, topo, mix_seed(config.seed)));
  result.mapping = state.mapping();
  result.cost = state.cost();
  result.energy = state.energy();
  result.crossing = state.crossing();

  for (int restart = 0; restart < config.perturbations; ++restart) {
    state.reset(random_mapping(clusters, topo,
                               mix_seed(config.seed ^ mix_seed(static_cast<std::uint64_t>(restart) + 1))));
    auto& history = result.history.emplace_back();
    history.push_back(state.cost());

    for (int k = 0; k < iterations; ++k) {
      double best_change = std::numeric_limits<double>::infinity();
      ClusterId best_cluster = -1;
      TileId best_target = -1;
      SwapEvaluator::Delta best_delta;

      const auto consider = [&](ClusterId a, TileId target) {
        const auto d = state.evaluate(a, target);
        const double change = state.weigh(d);
        if (change < best_change) {
          best_change = change;
          best_cluster = a;
          best_target = target;
          best_delta = d;
        }
      };
      // Neighbour order: (a, b) over cluster pairs, then a with each vacant tile.
      for (ClusterId a = 0; a < clusters; ++a) {
        for (ClusterId b = a + 1; b < clusters; ++b) consider(a, state.tile(b));
        for (TileId t = 0; t < topo.tile_count(); ++t) {
          if (state.occupant(t) < 0) consider(a, t);
        }
      }
      if (!(best_change < 0.0)) break;
      state.apply(best_cluster, best_target, best_delta);
      history.push_back(state.cost());
    }

    if (state.cost() < result.cost) {
      result.mapping = state.mapping();
      result.cost = state.cost();
      result.energy = state.energy();
      result.crossing = state.crossing();
    }
    if (result.cost == 0.0) break;  // costs are non-negative
  }
  return result;
}

MonteCarloResult monte_carlo(const ClusterGraph& graph, const LadderTopology& topo,
                             const MapperConfig& config, int samples) {
  config.validate();
  check_fits(graph, topo);
  if (samples < 1) throw InputError("Monte Carlo needs at least one sample");

  MonteCarloResult result;
  result.min_cost = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (int i = 0; i < samples; ++i) {
    Mapping m = random_mapping(graph.cluster_count, topo,
                               mix_seed(config.seed + 0x5eed0000ULL + static_cast<std::uint64_t>(i)));
    const double c = cost(graph, m, topo, config);
    total += c;
    if (c < result.min_cost) {
      result.min_cost = c;
      result.best = std::move(m);
    }
  }
  result.mean_cost = total / samples;
  return result;
}

BruteForceResult brute_force(const ClusterGraph& graph, const LadderTopology& topo,
                             const MapperConfig& config) {
  config.validate();
  check_fits(graph, topo);
  if (topo.tile_count() > kBruteForceMaxTiles) {
    throw InputError(fmt::format("brute force limited to {} tiles, got {}", kBruteForceMaxTiles,
                                 topo.tile_count()));
  }

  BruteForceResult result;
  result.cost = std::numeric_limits<double>::infinity();
  std::vector<TileId> assignment(static_cast<std::size_t>(graph.cluster_count));
  std::vector<bool> used(static_cast<std::size_t>(topo.tile_count()), false);

  const auto recurse = [&](auto&& self, std::size_t cluster) -> void {
    if (cluster == assignment.size()) {
      ++result.enumerated;
      Mapping m(assignment);
      const double c = cost(graph, m, topo, config);
      if (c < result.cost) {
        result.cost = c;
        result.mapping = std::move(m);
      }
      return;
    }
    for (TileId t = 0; t < topo.tile_count(); ++t) {
      if (used[static_cast<std::size_t>(t)]) continue;
      used[static_cast<std::size_t>(t)] = true;
      assignment[cluster] = t;
      self(self, cluster + 1);
      used[static_cast<std::size_t>(t)] = false;
    }
  };
  recurse(recurse, 0);
  return result;
}

}  // namespace ladder

#include "epiwalk/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "engine.hpp"

namespace epiwalk {

using nlohmann::json;

std::pair<std::int32_t, std::int32_t> pair_from_index(std::int32_t k,
                                                      std::size_t idx) {
  // Row i starts at offset i*k - i(i+1)/2; solve by scanning (k is small).
  std::size_t off = 0;
  for (std::int32_t i = 0; i < k - 1; ++i) {
    std::size_t row = static_cast<std::size_t>(k - 1 - i);
    if (idx < off + row)
      return {i, static_cast<std::int32_t>(i + 1 + (idx - off))};
    off += row;
  }
  throw std::out_of_range("pair_from_index: index out of range");
}

bool WeightedInteractionGraph::fully_resolved() const {
  return std::find(weight.begin(), weight.end(), kUnresolved) == weight.end();
}

std::pair<WeightedInteractionGraph, EpidemicTrace> build_upsilon(
    const RegularGraph& g, std::int32_t k, const SimOptions& opts,
    std::uint64_t seed) {
  auto res = detail::run_engine(g, k, opts, seed, detail::EngineMode::upsilon);
  return {std::move(res.graph), std::move(res.trace)};
}

std::pair<WeightedInteractionGraph, EpidemicTrace> build_psi(
    const RegularGraph& g, std::int32_t k, const SimOptions& opts,
    std::uint64_t seed) {
  auto res = detail::run_engine(g, k, opts, seed, detail::EngineMode::psi);
  return {std::move(res.graph), std::move(res.trace)};
}

ParticleGraph threshold(const WeightedInteractionGraph& w, std::int64_t xi) {
  ParticleGraph pg;
  pg.k = w.k;
  for (std::size_t e = 0; e < w.weight.size(); ++e) {
    if (w.weight[e] == kUnresolved) {
      auto [a, b] = pair_from_index(w.k, e);
      throw std::runtime_error("threshold: edge (" + std::to_string(a) + "," +
                               std::to_string(b) + ") unresolved");
    }
    if (xi == kXiInfinite || w.weight[e] <= xi)
      pg.edges.push_back(pair_from_index(w.k, e));
  }
  return pg;
}

std::vector<std::vector<std::int32_t>> components(const ParticleGraph& pg) {
  std::vector<std::int32_t> parent(pg.k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [a, b] : pg.edges) {
    std::int32_t ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::vector<std::int32_t>> comps;
  std::vector<std::int32_t> comp_of(pg.k, -1);
  for (std::int32_t v = 0; v < pg.k; ++v) {
    std::int32_t root = find(v);
    if (comp_of[root] < 0) {
      comp_of[root] = static_cast<std::int32_t>(comps.size());
      comps.emplace_back();
    }
    comps[comp_of[root]].push_back(v);
  }
  return comps;
}

namespace {

std::vector<std::int64_t> dijkstra(const WeightedInteractionGraph& w,
                                   std::span<const std::int32_t> sources,
                                   std::int64_t max_edge_weight,
                                   bool throw_on_unresolved) {
  const std::int32_t k = w.k;
  std::vector<std::int64_t> dist(k, kUnreachable);
  std::vector<char> done(k, 0);
  for (std::int32_t s : sources) {
    if (s < 0 || s >= k)
      throw std::invalid_argument("weighted_distances: source out of range");
    dist[s] = 0;
  }
  for (std::int32_t round = 0; round < k; ++round) {
    std::int32_t u = -1;
    for (std::int32_t v = 0; v < k; ++v)
      if (!done[v] && dist[v] != kUnreachable && (u < 0 || dist[v] < dist[u]))
        u = v;
    if (u < 0) break;
    done[u] = 1;
    for (std::int32_t v = 0; v < k; ++v) {
      if (v == u || done[v]) continue;
      std::int64_t wt = w.weight[pair_index(k, u, v)];
      if (wt == kUnresolved) {
        if (throw_on_unresolved)
          throw std::runtime_error("weighted_distances: edge (" +
                                   std::to_string(u) + "," + std::to_string(v) +
                                   ") unresolved");
        continue;
      }
      if (wt > max_edge_weight) continue;
      if (dist[u] + wt < dist[v]) dist[v] = dist[u] + wt;
    }
  }
  return dist;
}

}  // namespace

std::vector<std::int64_t> weighted_distances(
    const WeightedInteractionGraph& w, std::span<const std::int32_t> sources) {
  return dijkstra(w, sources, std::numeric_limits<std::int64_t>::max(), true);
}

std::vector<std::int64_t> weighted_distances(
    const WeightedInteractionGraph& w, std::span<const std::int32_t> sources,
    std::int64_t max_edge_weight) {
  return dijkstra(w, sources, max_edge_weight, false);
}

WeightedInteractionGraph upsilon_from_interactions(
    std::int32_t k, const std::vector<Interaction>& interactions,
    const std::vector<std::int32_t>& initial_infectives) {
  for (std::size_t i = 1; i < interactions.size(); ++i)
    if (interactions[i].step < interactions[i - 1].step)
      throw std::invalid_argument(
          "upsilon_from_interactions: interactions must be step-ordered");

  // Pass 1: SI infection times under the snapshot rule.
  std::vector<std::int64_t> infected_at(k, kNever);
  for (std::int32_t x : initial_infectives) infected_at[x] = 0;
  for (const auto& ev : interactions) {
    if (can_infect_at(infected_at[ev.a], kXiInfinite, ev.step) &&
        infected_at[ev.b] == kNever) {
      infected_at[ev.b] = ev.step;
    } else if (can_infect_at(infected_at[ev.b], kXiInfinite, ev.step) &&
               infected_at[ev.a] == kNever) {
      infected_at[ev.a] = ev.step;
    }
  }

  WeightedInteractionGraph wig;
  wig.k = k;
  wig.weight.assign(pair_count(k), kUnresolved);
  wig.activation.assign(pair_count(k), kNever);
  wig.phase.assign(pair_count(k), EdgePhase::unresolved);
  for (std::int32_t i = 0; i < k; ++i)
    for (std::int32_t j = i + 1; j < k; ++j) {
      if (infected_at[i] == kNever && infected_at[j] == kNever) continue;
      std::int64_t ti = infected_at[i] == kNever ? kUnreachable : infected_at[i];
      std::int64_t tj = infected_at[j] == kNever ? kUnreachable : infected_at[j];
      wig.activation[pair_index(k, i, j)] = std::min(ti, tj);
    }
  // Pass 2: first interaction strictly after activation.
  for (const auto& ev : interactions) {
    std::size_t e = pair_index(k, ev.a, ev.b);
    if (wig.weight[e] == kUnresolved && wig.activation[e] != kNever &&
        ev.step > wig.activation[e]) {
      wig.weight[e] = ev.step - wig.activation[e];
      wig.phase[e] = EdgePhase::si;
    }
  }
  wig.censored = !wig.fully_resolved();
  return wig;
}

namespace {
const char* phase_name(EdgePhase p) {
  switch (p) {
    case EdgePhase::si: return "si";
    case EdgePhase::phase1: return "phase1";
    case EdgePhase::phase2: return "phase2";
    default: return "unresolved";
  }
}
EdgePhase phase_from_name(const std::string& s) {
  if (s == "si") return EdgePhase::si;
  if (s == "phase1") return EdgePhase::phase1;
  if (s == "phase2") return EdgePhase::phase2;
  return EdgePhase::unresolved;
}
}  // namespace

std::string WeightedInteractionGraph::to_json() const {
  json j;
  j["k"] = k;
  j["censored"] = censored;
  json edges = json::array();
  for (std::size_t e = 0; e < weight.size(); ++e) {
    auto [a, b] = pair_from_index(k, e);
    json row;
    row["i"] = a;
    row["j"] = b;
    row["w"] = weight[e] == kUnresolved ? json() : json(weight[e]);
    row["t"] = activation[e] == kNever ? json() : json(activation[e]);
    row["phase"] = phase_name(phase[e]);
    edges.push_back(std::move(row));
  }
  j["edges"] = std::move(edges);
  return j.dump();
}

WeightedInteractionGraph interaction_graph_from_json(const std::string& text) {
  json j = json::parse(text);
  WeightedInteractionGraph w;
  w.k = j.at("k").get<std::int32_t>();
  w.censored = j.at("censored").get<bool>();
  w.weight.assign(pair_count(w.k), kUnresolved);
  w.activation.assign(pair_count(w.k), kNever);
  w.phase.assign(pair_count(w.k), EdgePhase::unresolved);
  for (const auto& row : j.at("edges")) {
    std::size_t e = pair_index(w.k, row.at("i").get<std::int32_t>(),
                               row.at("j").get<std::int32_t>());
    if (!row.at("w").is_null()) w.weight[e] = row.at("w").get<std::int64_t>();
    if (!row.at("t").is_null()) w.activation[e] = row.at("t").get<std::int64_t>();
    w.phase[e] = phase_from_name(row.at("phase").get<std::string>());
  }
  return w;
}

std::string ParticleGraph::to_json() const {
  json j;
  j["k"] = k;
  json es = json::array();
  for (const auto& [a, b] : edges) es.push_back({a, b});
  j["edges"] = std::move(es);
  return j.dump();
}

}  // namespace epiwalk

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epiwalk/epidemic.hpp"

namespace epiwalk {

inline constexpr std::int64_t kUnresolved = -1;
inline constexpr std::int64_t kUnreachable =
    std::numeric_limits<std::int64_t>::max();

enum class EdgePhase : std::uint8_t { unresolved, si, phase1, phase2 };

// Index into the upper-triangular pair arrays for i < j.
inline std::size_t pair_index(std::int32_t k, std::int32_t i, std::int32_t j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i) * k - static_cast<std::size_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}
inline std::size_t pair_count(std::int32_t k) {
  return static_cast<std::size_t>(k) * (k - 1) / 2;
}
std::pair<std::int32_t, std::int32_t> pair_from_index(std::int32_t k,
                                                      std::size_t idx);

// Complete weighted graph on the particle set. An edge (x,y) activates at
// t(e) = min(t(x), t(y)) and its weight is the delay to the first xy
// interaction strictly after t(e). Unresolved edges (censored runs only)
// carry weight kUnresolved.
struct WeightedInteractionGraph {
  std::int32_t k = 0;
  std::vector<std::int64_t> weight;
  std::vector<std::int64_t> activation;  // kNever until an endpoint is infected
  std::vector<EdgePhase> phase;
  bool censored = false;

  std::int64_t weight_of(std::int32_t i, std::int32_t j) const {
    return weight[pair_index(k, i, j)];
  }
  std::int64_t activation_of(std::int32_t i, std::int32_t j) const {
    return activation[pair_index(k, i, j)];
  }
  bool fully_resolved() const;

  std::string to_json() const;
};
WeightedInteractionGraph interaction_graph_from_json(const std::string& text);

// Simple undirected graph on the particle set (the image of f_xi).
struct ParticleGraph {
  std::int32_t k = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;

  std::string to_json() const;
};

// SI run (xi = infinity) extended past full infection until every pair edge
// has resolved or max_steps is hit (graph flagged censored; unresolved edges
// marked). opts.xi is ignored.
std::pair<WeightedInteractionGraph, EpidemicTrace> build_upsilon(
    const RegularGraph& g, std::int32_t k, const SimOptions& opts,
    std::uint64_t seed);

// Two-phase SIR construction. Phase 1 runs the true SIR process and weights
// every edge with an ever-infected endpoint; when no active edges remain,
// the lowest-indexed survivor receives a pseudo-infection with infinite
// period and an SI process on the survivors weights the remaining edges.
// Pseudo-infected particles are not counted in M_k. Requires finite opts.xi.
std::pair<WeightedInteractionGraph, EpidemicTrace> build_psi(
    const RegularGraph& g, std::int32_t k, const SimOptions& opts,
    std::uint64_t seed);

// Keep edges with weight <= xi (xi = kXiInfinite keeps all). Throws
// std::runtime_error naming the pair if any edge is unresolved.
ParticleGraph threshold(const WeightedInteractionGraph& w, std::int64_t xi);

// Connected components as disjoint ascending vertex sets covering 0..k-1.
std::vector<std::vector<std::int32_t>> components(const ParticleGraph& pg);

// Single-source-set shortest path distances over the resolved edge weights;
// kUnreachable where no path exists. The filtered variant walks only edges
// with weight <= max_edge_weight.
std::vector<std::int64_t> weighted_distances(
    const WeightedInteractionGraph& w, std::span<const std::int32_t> sources);
std::vector<std::int64_t> weighted_distances(
    const WeightedInteractionGraph& w, std::span<const std::int32_t> sources,
    std::int64_t max_edge_weight);

// Pure reconstruction of the SI interaction graph from an interaction
// sequence: independent oracle for the engine's online bookkeeping, and the
// bridge from scripted schedules to their weight tables.
WeightedInteractionGraph upsilon_from_interactions(
    std::int32_t k, const std::vector<Interaction>& interactions,
    const std::vector<std::int32_t>& initial_infectives);

}  // namespace epiwalk

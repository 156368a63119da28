#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "epiwalk/graph.hpp"
#include "epiwalk/rng.hpp"

namespace epiwalk {

// k synchronous independent random walks. Each particle owns an RNG stream
// derived from (trial seed, particle id), so trajectories are reproducible
// and unaffected by particles being added or removed.
struct WalkState {
  std::vector<std::int32_t> positions;
  std::int64_t step = 0;
  std::vector<std::mt19937_64> streams;

  std::int32_t k() const { return static_cast<std::int32_t>(positions.size()); }
};

struct MeetingEvent {
  std::int64_t step = 0;
  std::int32_t vertex = 0;
  std::vector<std::int32_t> particles;  // >= 2, ascending
};

struct PlacementOptions {
  double alpha = 1.0;    // d_min = ceil(alpha * (ln ln n + ln k)); 0 = unconstrained
  double epsilon = 1.0;  // particle budget constraint k <= n^epsilon
  int max_retries = 200;
};

// Uniform placement, rejected until all pairwise graph distances are at
// least d_min. Throws std::runtime_error naming a violating pair once the
// retry budget is exhausted (k too large or alpha too aggressive for n).
WalkState init_general_position(const RegularGraph& g, std::int32_t k,
                                std::uint64_t seed,
                                const PlacementOptions& opts = {});

// Fully independent uniform placement (coincidences allowed); used for
// stationary-start experiments.
WalkState init_uniform(const RegularGraph& g, std::int32_t k,
                       std::uint64_t seed);

// One synchronous step: every particle moves to a uniform random neighbor,
// consuming only its own stream; state.step increments by exactly 1.
void advance(WalkState& state, const RegularGraph& g);

// One MeetingEvent per vertex occupied by >= 2 particles, vertices
// ascending, particle ids ascending. Empty when all positions distinct.
void collect_meetings(const WalkState& state, std::vector<MeetingEvent>& out);
std::vector<MeetingEvent> coincident_pairs(const WalkState& state);

}  // namespace epiwalk

#include "epiwalk/walker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace epiwalk {

namespace {

std::vector<std::mt19937_64> make_particle_streams(std::uint64_t seed,
                                                   std::int32_t k) {
  std::vector<std::mt19937_64> streams;
  streams.reserve(k);
  for (std::int32_t i = 0; i < k; ++i)
    streams.push_back(make_stream(seed, StreamTag::particle, i));
  return streams;
}

// True if some other particle lies within distance < d_min of positions[i].
// Returns the offending particle, or -1.
std::int32_t near_violation(const RegularGraph& g,
                            const std::vector<std::int32_t>& positions,
                            std::int32_t i, std::int32_t d_min) {
  if (d_min <= 0) return -1;
  auto dist = bfs_distances(g, positions[i], d_min - 1);
  for (std::int32_t j = 0; j < static_cast<std::int32_t>(positions.size()); ++j) {
    if (j == i) continue;
    std::int32_t d = dist[positions[j]];
    if (d >= 0 && d < d_min) return j;
  }
  return -1;
}

}  // namespace

WalkState init_uniform(const RegularGraph& g, std::int32_t k,
                       std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("walker: k must be >= 2");
  WalkState st;
  auto place = make_stream(seed, StreamTag::placement);
  st.positions.resize(k);
  for (auto& p : st.positions)
    p = static_cast<std::int32_t>(uniform_below(place, g.n));
  st.streams = make_particle_streams(seed, k);
  return st;
}

WalkState init_general_position(const RegularGraph& g, std::int32_t k,
                                std::uint64_t seed,
                                const PlacementOptions& opts) {
  if (k < 2) throw std::invalid_argument("walker: k must be >= 2");
  if (static_cast<double>(k) > std::pow(static_cast<double>(g.n), opts.epsilon))
    throw std::invalid_argument("walker: k exceeds n^epsilon budget (k=" +
                                std::to_string(k) + ", n=" + std::to_string(g.n) +
                                ")");
  const std::int32_t d_min = static_cast<std::int32_t>(
      std::ceil(opts.alpha * (std::log(std::log(static_cast<double>(g.n))) +
                              std::log(static_cast<double>(k)))));

  WalkState st;
  st.positions.resize(k);
  auto place = make_stream(seed, StreamTag::placement);
  std::int32_t bad_i = -1, bad_j = -1;
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    for (auto& p : st.positions)
      p = static_cast<std::int32_t>(uniform_below(place, g.n));
    bool ok = true;
    for (std::int32_t i = 0; i < k && ok; ++i) {
      std::int32_t j = near_violation(g, st.positions, i, d_min);
      if (j >= 0) {
        ok = false;
        bad_i = i;
        bad_j = j;
      }
    }
    if (ok) {
      st.streams = make_particle_streams(seed, k);
      return st;
    }
  }
  throw std::runtime_error(
      "init_general_position: retry budget exhausted; particles " +
      std::to_string(bad_i) + " and " + std::to_string(bad_j) +
      " closer than " + std::to_string(d_min) +
      " (k too large or alpha too aggressive for n=" + std::to_string(g.n) + ")");
}

void advance(WalkState& state, const RegularGraph& g) {
  const std::int32_t k = state.k();
  for (std::int32_t i = 0; i < k; ++i) {
    const auto row =
        g.adj.data() + static_cast<std::size_t>(state.positions[i]) * g.r;
    state.positions[i] =
        row[uniform_below(state.streams[i], static_cast<std::uint64_t>(g.r))];
  }
  ++state.step;
}

void collect_meetings(const WalkState& state, std::vector<MeetingEvent>& out) {
  out.clear();
  const std::int32_t k = state.k();
  // (vertex, particle) pairs sorted: groups come out vertex-ascending with
  // ascending particle ids.
  thread_local std::vector<std::pair<std::int32_t, std::int32_t>> scratch;
  scratch.clear();
  scratch.reserve(k);
  for (std::int32_t i = 0; i < k; ++i) scratch.emplace_back(state.positions[i], i);
  std::sort(scratch.begin(), scratch.end());
  std::size_t i = 0;
  while (i < scratch.size()) {
    std::size_t j = i + 1;
    while (j < scratch.size() && scratch[j].first == scratch[i].first) ++j;
    if (j - i >= 2) {
      MeetingEvent ev;
      ev.step = state.step;
      ev.vertex = scratch[i].first;
      for (std::size_t t = i; t < j; ++t) ev.particles.push_back(scratch[t].second);
      out.push_back(std::move(ev));
    }
    i = j;
  }
}

std::vector<MeetingEvent> coincident_pairs(const WalkState& state) {
  std::vector<MeetingEvent> out;
  collect_meetings(state, out);
  return out;
}

}  // namespace epiwalk

#include "engine.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <stdexcept>
#include <string>

#include "epiwalk/theory.hpp"
#include "epiwalk/walker.hpp"

namespace epiwalk::detail {

namespace {

void validate_options(std::int32_t k, const SimOptions& opts, EngineMode mode) {
  if (k < 2) throw std::invalid_argument("epidemic: k must be >= 2");
  if (opts.rho <= 0.0 || opts.rho > 1.0)
    throw std::invalid_argument("epidemic: rho must lie in (0,1]");
  if (opts.initial_infectives.empty())
    throw std::invalid_argument("epidemic: need at least one initial infective");
  for (std::int32_t x : opts.initial_infectives)
    if (x < 0 || x >= k)
      throw std::invalid_argument("epidemic: initial infective out of range");
  if (opts.xi != kXiInfinite && opts.xi < 1)
    throw std::invalid_argument("epidemic: xi must be a positive integer or infinite");
  if (mode == EngineMode::psi && opts.xi == kXiInfinite)
    throw std::invalid_argument("build_psi: requires finite xi");
}

}  // namespace

EngineResult run_engine(const RegularGraph& g, std::int32_t k,
                        const SimOptions& opts, std::uint64_t seed,
                        EngineMode mode) {
  validate_options(k, opts, mode);
  const std::int64_t xi = mode == EngineMode::upsilon ? kXiInfinite : opts.xi;
  const bool track_edges = mode != EngineMode::trace_only;

  std::int64_t max_steps = opts.max_steps;
  if (max_steps <= 0) {
    max_steps = (mode == EngineMode::trace_only && xi == kXiInfinite)
                    ? default_si_max_steps(g.n, g.r, k, opts.rho)
                    : default_resolution_max_steps(g.n);
  }

  PlacementOptions placement;
  placement.alpha = opts.alpha;
  placement.max_retries = opts.placement_retries;
  WalkState walk = init_general_position(g, k, seed, placement);
  auto interactions_rng = make_stream(seed, StreamTag::interaction);

  EngineResult res;
  EpidemicTrace& trace = res.trace;
  trace.n = g.n;
  trace.r = g.r;
  trace.k = k;
  trace.rho = opts.rho;
  trace.xi = opts.xi;
  trace.seed = seed;
  trace.infected_at.assign(k, kNever);

  WeightedInteractionGraph& wig = res.graph;
  const std::size_t total_pairs = pair_count(k);
  std::size_t resolved = 0;
  std::int64_t active_edges = 0;
  if (track_edges) {
    wig.k = k;
    wig.weight.assign(total_pairs, kUnresolved);
    wig.activation.assign(total_pairs, kNever);
    wig.phase.assign(total_pairs, EdgePhase::unresolved);
  }

  std::int64_t initial_count = 0;
  for (std::int32_t x : opts.initial_infectives) {
    if (trace.infected_at[x] == kNever) {
      trace.infected_at[x] = 0;
      ++initial_count;
    }
  }

  // Activates every not-yet-activated edge incident to x at time t.
  auto activate_edges = [&](std::int32_t x, std::int64_t t) {
    for (std::int32_t z = 0; z < k; ++z) {
      if (z == x) continue;
      std::size_t e = pair_index(k, x, z);
      if (wig.activation[e] == kNever) {
        wig.activation[e] = t;
        ++active_edges;
      }
    }
  };
  if (track_edges)
    for (std::int32_t x = 0; x < k; ++x)
      if (trace.infected_at[x] == 0) activate_edges(x, 0);

  std::vector<std::int64_t> pseudo_at;
  int phase = 1;
  if (mode == EngineMode::psi) pseudo_at.assign(k, kNever);

  // Lowest-indexed never-infected particle incident to an unresolved edge
  // and not yet pseudo-infected; -1 if none.
  auto next_pseudo_seed = [&]() -> std::int32_t {
    for (std::size_t e = 0; e < total_pairs; ++e) {
      if (wig.weight[e] != kUnresolved) continue;
      auto [a, b] = pair_from_index(k, e);
      if (trace.infected_at[a] == kNever && pseudo_at[a] == kNever) return a;
      if (trace.infected_at[b] == kNever && pseudo_at[b] == kNever) return b;
    }
    return -1;
  };

  std::int64_t ever_infected = initial_count;
  std::int64_t last_infection = kNever;
  // First step with no infectious particle left (finite xi only).
  std::int64_t infectious_until = xi == kXiInfinite ? -1 : xi;

  if (opts.trajectory_dump) {
    *opts.trajectory_dump << "step,particle,vertex\n";
    for (std::int32_t i = 0; i < k; ++i)
      *opts.trajectory_dump << 0 << ',' << i << ',' << walk.positions[i] << '\n';
  }

  std::vector<MeetingEvent> meetings;
  bool done = false;
  while (!done) {
    if (walk.step >= max_steps) {
      trace.censored = true;
      break;
    }
    advance(walk, g);
    const std::int64_t t = walk.step;
    if (opts.trajectory_dump)
      for (std::int32_t i = 0; i < k; ++i)
        *opts.trajectory_dump << t << ',' << i << ',' << walk.positions[i] << '\n';

    collect_meetings(walk, meetings);
    for (const MeetingEvent& ev : meetings) {
      const auto& ps = ev.particles;
      const std::size_t m = ps.size();
      for (std::size_t ai = 0; ai < m; ++ai) {
        for (std::size_t bi = ai + 1; bi < m; ++bi) {
          if (!bernoulli(interactions_rng, opts.rho)) continue;
          const std::int32_t a = ps[ai], b = ps[bi];
          if (opts.record_interactions)
            trace.interactions.push_back({t, a, b});

          // Genuine infection against the end-of-previous-step snapshot.
          std::int32_t newly = -1;
          if (can_infect_at(trace.infected_at[a], xi, t) &&
              trace.infected_at[b] == kNever) {
            newly = b;
          } else if (can_infect_at(trace.infected_at[b], xi, t) &&
                     trace.infected_at[a] == kNever) {
            newly = a;
          }
          if (newly >= 0) {
            assert(phase == 1);
            trace.infected_at[newly] = t;
            ++ever_infected;
            last_infection = t;
            if (xi != kXiInfinite)
              infectious_until = std::max(infectious_until, t + xi);
            if (track_edges) activate_edges(newly, t);
          }

          if (phase == 2) {
            // Pseudo-infections spread SI-style among the survivors.
            std::int32_t pseudo_new = -1;
            if (pseudo_at[a] != kNever && pseudo_at[a] < t &&
                trace.infected_at[b] == kNever && pseudo_at[b] == kNever) {
              pseudo_new = b;
            } else if (pseudo_at[b] != kNever && pseudo_at[b] < t &&
                       trace.infected_at[a] == kNever && pseudo_at[a] == kNever) {
              pseudo_new = a;
            }
            if (pseudo_new >= 0) {
              pseudo_at[pseudo_new] = t;
              activate_edges(pseudo_new, t);
            }
          }

          if (track_edges) {
            std::size_t e = pair_index(k, a, b);
            if (wig.weight[e] == kUnresolved && wig.activation[e] != kNever &&
                wig.activation[e] < t) {
              wig.weight[e] = t - wig.activation[e];
              wig.phase[e] = mode == EngineMode::upsilon
                                 ? EdgePhase::si
                                 : (phase == 1 ? EdgePhase::phase1
                                               : EdgePhase::phase2);
              ++resolved;
              --active_edges;
            }
          }
        }
      }
    }

    // Halting / phase transitions.
    switch (mode) {
      case EngineMode::trace_only:
        if (xi == kXiInfinite) {
          done = ever_infected == k;
        } else {
          done = t >= infectious_until;
        }
        break;
      case EngineMode::upsilon:
        done = resolved == total_pairs;
        break;
      case EngineMode::psi:
        if (resolved == total_pairs) {
          done = true;
        } else if (active_edges == 0) {
          // Phase 1 over (or a pseudo component exhausted): give the next
          // survivor a pseudo-infection and keep weighting edges.
          std::int32_t s = next_pseudo_seed();
          if (s < 0) {
            done = true;  // nothing left that could resolve an edge
          } else {
            phase = 2;
            pseudo_at[s] = t;
            activate_edges(s, t);
          }
        }
        break;
    }
  }

  trace.mk = ever_infected;
  if (ever_infected > initial_count && last_infection != kNever)
    trace.tk = last_infection;
  wig.censored = trace.censored;
  return res;
}

}  // namespace epiwalk::detail

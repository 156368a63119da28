#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "epiwalk/graph.hpp"

namespace epiwalk {

inline constexpr std::int64_t kNever = -1;        // "never infected"
inline constexpr std::int64_t kXiInfinite = -1;   // SI model sentinel

enum class Status : std::uint8_t { S, I, R };

// Status of a particle at time step t from its infection time. Statuses are
// a pure function of (infected_at, xi, t): infected during
// [infected_at, infected_at + xi), recovered from infected_at + xi on.
inline Status status_at(std::int64_t infected_at, std::int64_t xi,
                        std::int64_t t) {
  if (infected_at == kNever || t < infected_at) return Status::S;
  if (xi == kXiInfinite || t < infected_at + xi) return Status::I;
  return Status::R;
}

// Infection passes from x at step t iff x was infected strictly before t and
// is not yet recovered at t-1, i.e. t_x < t <= t_x + xi. Evaluating against
// the end-of-previous-step snapshot makes same-step infections
// non-transitive.
inline bool can_infect_at(std::int64_t infected_at, std::int64_t xi,
                          std::int64_t t) {
  return infected_at != kNever && infected_at < t &&
         (xi == kXiInfinite || t <= infected_at + xi);
}

struct Interaction {
  std::int64_t step = 0;
  std::int32_t a = 0, b = 0;  // unordered, stored a < b
};

struct EpidemicTrace {
  std::int32_t n = 0, r = 0, k = 0;
  double rho = 1.0;
  std::int64_t xi = kXiInfinite;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> infected_at;   // kNever if never infected
  std::vector<Interaction> interactions;   // every interaction, infecting or not
  std::int64_t mk = 0;                     // particles ever infected
  std::optional<std::int64_t> tk;          // step of last infection; empty if mk == |I(0)|
  bool censored = false;                   // stopped at max_steps while still live

  std::string to_json() const;
};
EpidemicTrace trace_from_json(const std::string& text);

struct SimOptions {
  double rho = 1.0;
  std::int64_t xi = kXiInfinite;
  std::vector<std::int32_t> initial_infectives = {0};
  std::int64_t max_steps = 0;  // 0 = default policy
  double alpha = 1.0;          // general-position constant for placement
  int placement_retries = 200;
  bool record_interactions = true;
  std::ostream* trajectory_dump = nullptr;  // CSV "step,particle,vertex"
};

// Default step budgets: 10 * ceil(2 theta_r n ln k / (psi k)) for plain SI
// runs, ceil(n^1.5) when an interaction graph must fully resolve.
std::int64_t default_si_max_steps(std::int32_t n, std::int32_t r,
                                  std::int32_t k, double rho);
std::int64_t default_resolution_max_steps(std::int32_t n);

// Full SI/SIR dynamics on top of the walker. Per step, after all particles
// move: every coincident unordered pair draws an interaction with
// probability rho, infections are evaluated against the end-of-previous-step
// state, recoveries follow t_x + xi <= t. Halts when no particle is infected
// (SIR), all are infected (SI), or at max_steps (trace flagged censored).
EpidemicTrace run_epidemic(const RegularGraph& g, std::int32_t k,
                           const SimOptions& opts, std::uint64_t seed);

struct ScheduledInteraction {
  std::int32_t a = 0, b = 0;
  std::int64_t step = 0;
};

// Same infection rules, but interactions occur exactly at the scheduled
// events (rho plays no role). Schedule steps must be non-decreasing.
EpidemicTrace run_scripted(std::int32_t k,
                           const std::vector<ScheduledInteraction>& schedule,
                           std::int64_t xi,
                           const std::vector<std::int32_t>& initial_infectives);

}  // namespace epiwalk

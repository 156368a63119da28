#pragma once

#include <cstdint>
#include <optional>

#include "epiwalk/graph.hpp"

namespace epiwalk {

// Uniform random r-regular simple graph via the configuration (pairing)
// model: match degree stubs uniformly, reject any pairing with loops or
// parallel edges. For fixed r the acceptance probability is bounded below
// by a constant, so the retry cap is never hit in practice.
//
// Preconditions: n*r even, r >= 3, n > r. Identical (n, r, seed) yield an
// identical graph. Throws std::invalid_argument on bad parameters and
// std::runtime_error if max_attempts pairings all fail.
RegularGraph generate_regular(std::int32_t n, std::int32_t r,
                              std::uint64_t seed, int max_attempts = 1000);

struct TypicalityReport {
  bool connected = false;
  bool bipartite = false;
  double lambda2 = 0.0;           // second-largest adjacency eigenvalue
  std::int32_t small_cycle_vertex_count = 0;  // vertices on cycles of length <= L1
  std::int32_t l1 = 0;            // floor(eps1 * log_r n)
  bool p4_violation = false;      // two short cycles too close together
  double treelike_fraction = 0.0; // sampled fraction with cycle-free L1-ball
};

struct TypicalityOptions {
  double eps1 = 0.25;
  double eps = 0.1;                 // spectral slack in lambda2 <= 2*sqrt(r-1)+eps
  std::int32_t sample_size = 0;     // 0 = all vertices
  double lambda2_tol = 1e-9;
  int lambda2_max_iters = 2000;
};

// Populates the P1-P4 diagnostics. Connectivity and bipartiteness by full
// traversal, small cycles by exact per-vertex BFS girth, treelike_fraction
// on a uniform vertex sample (exact when sample_size = n). Deterministic
// for a given graph.
TypicalityReport check_typical(const RegularGraph& g,
                               const TypicalityOptions& opts = {});

// Second-largest eigenvalue (by value) of the adjacency matrix, to absolute
// accuracy tol. Lanczos iteration restricted to the complement of the known
// top eigenpair (eigenvalue r, uniform vector). Requires g connected.
// Throws a diagnostic error carrying the last iterate on non-convergence.
double second_eigenvalue(const RegularGraph& g, double tol = 1e-9,
                         int max_iters = 2000);

// Shortest cycle through v, or nullopt if none within length <= max_len.
std::optional<std::int32_t> shortest_cycle_through(const RegularGraph& g,
                                                   std::int32_t v,
                                                   std::int32_t max_len);

}  // namespace epiwalk

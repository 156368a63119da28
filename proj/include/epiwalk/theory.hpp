#pragma once

#include <cstdint>

#include "epiwalk/interaction.hpp"

namespace epiwalk::theory {

// Effective per-meeting interaction probability psi = rho(r-1)/(r-2+rho).
// Satisfies rho <= psi <= 1, with psi = 1 iff rho = 1.
double psi(double rho, std::int32_t r);

// theta_r = (r-1)/(r-2); scales pairwise meeting times to theta_r * n.
double theta(std::int32_t r);

// Per-edge geometric rate q = psi / (theta_r n).
double edge_rate(std::int32_t n, std::int32_t r, double rho);

// Thresholded edge probability q_hat = 1 - (1-q)^xi (xi infinite -> 1).
double edge_probability(std::int32_t n, std::int32_t r, double rho,
                        std::int64_t xi);

// Outbreak threshold parameter phi = k(1 - (1 - psi/(theta_r n))^xi);
// xi = infinity returns k (convention x^inf = 0 for |x| < 1).
double phi_threshold(std::int32_t k, std::int32_t n, std::int32_t r,
                     double rho, std::int64_t xi);

// Smallest integer xi with phi(xi) >= phi_target (ceiling of the exact
// inversion). Requires 0 < phi_target < k.
std::int64_t xi_for_phi(double phi_target, std::int32_t k, std::int32_t n,
                        std::int32_t r, double rho);

// Unique root C in (0,1) of 1 - x = e^{-cx}, bisected to ~1e-14; the
// supercritical outbreak fraction. Requires c > 1.
double giant_fraction(double c);

// Completion-time limit 2 theta_r n ln k / (psi k).
double completion_prediction(std::int32_t n, std::int32_t k, std::int32_t r,
                             double rho);

struct TwoParticleChain {
  double phi_escape;  // no interaction before the pair moves apart
  double f;           // same-vertex first-return probability 1/(r-1)^2
  double phi_t;       // no interaction before being apart more than T steps
  double psi_check;   // 1 - phi_t; equals psi(rho, r) identically
};
TwoParticleChain two_particle_chain(double rho, std::int32_t r);

// Reference model Lambda: C(k,2) i.i.d. Geom(q) edge weights, support
// {1, 2, ...}.
WeightedInteractionGraph sample_lambda(std::int32_t k, double q,
                                       std::uint64_t seed);

// Direct Erdos-Renyi sample G_{k, q_hat}.
ParticleGraph sample_er(std::int32_t k, double q_hat, std::uint64_t seed);

// Leading-order first-visit law p_v / (1+p_v)^{t+1}; comparison curve only.
double first_visit_pmf(std::int64_t t, double p_v);

}  // namespace epiwalk::theory

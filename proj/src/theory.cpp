#include "epiwalk/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "epiwalk/rng.hpp"

namespace epiwalk::theory {

namespace {
void check_params(double rho, std::int32_t r) {
  if (r < 3) throw std::invalid_argument("theory: r must be >= 3");
  if (rho <= 0.0 || rho > 1.0)
    throw std::invalid_argument("theory: rho must lie in (0,1]");
}
}  // namespace

double psi(double rho, std::int32_t r) {
  check_params(rho, r);
  return rho * (r - 1) / (r - 2 + rho);
}

double theta(std::int32_t r) {
  if (r < 3) throw std::invalid_argument("theory: r must be >= 3");
  return static_cast<double>(r - 1) / (r - 2);
}

double edge_rate(std::int32_t n, std::int32_t r, double rho) {
  return psi(rho, r) / (theta(r) * n);
}

double edge_probability(std::int32_t n, std::int32_t r, double rho,
                        std::int64_t xi) {
  if (xi == kXiInfinite) return 1.0;
  // 1 - (1-q)^xi, evaluated stably for small q.
  return -std::expm1(static_cast<double>(xi) * std::log1p(-edge_rate(n, r, rho)));
}

double phi_threshold(std::int32_t k, std::int32_t n, std::int32_t r,
                     double rho, std::int64_t xi) {
  return k * edge_probability(n, r, rho, xi);
}

std::int64_t xi_for_phi(double phi_target, std::int32_t k, std::int32_t n,
                        std::int32_t r, double rho) {
  if (phi_target <= 0.0 || phi_target >= static_cast<double>(k))
    throw std::invalid_argument("xi_for_phi: need 0 < phi_target < k");
  const double q = edge_rate(n, r, rho);
  const double xi = std::log1p(-phi_target / k) / std::log1p(-q);
  auto rounded = static_cast<std::int64_t>(std::ceil(xi - 1e-9));
  return std::max<std::int64_t>(1, rounded);
}

double giant_fraction(double c) {
  if (c <= 1.0) throw std::domain_error("giant_fraction: requires c > 1");
  // f(x) = 1 - x - e^{-cx} has f(0) = 0, is positive just above 0 (slope
  // c - 1), and f(1) < 0; bisect on the sign change.
  auto f = [c](double x) { return -x - std::expm1(-c * x); };
  double lo = 1e-15, hi = 1.0;
  if (f(lo) <= 0.0) return 0.0;  // c barely above 1 and root below lo
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double completion_prediction(std::int32_t n, std::int32_t k, std::int32_t r,
                             double rho) {
  return 2.0 * theta(r) * n * std::log(static_cast<double>(k)) /
         (psi(rho, r) * k);
}

TwoParticleChain two_particle_chain(double rho, std::int32_t r) {
  check_params(rho, r);
  TwoParticleChain out;
  out.phi_escape = (1.0 - rho) * (r - 1) / (r - 1 + rho);
  out.f = 1.0 / (static_cast<double>(r - 1) * (r - 1));
  out.phi_t = out.phi_escape * (1.0 - out.f) / (1.0 - out.phi_escape * out.f);
  out.psi_check = 1.0 - out.phi_t;
  return out;
}

namespace {
std::int64_t sample_geometric(std::mt19937_64& rng, double q) {
  if (q >= 1.0) return 1;
  double u = uniform_unit(rng);
  if (u <= 0.0) u = 0x1.0p-53;
  return 1 + static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-q)));
}
}  // namespace

WeightedInteractionGraph sample_lambda(std::int32_t k, double q,
                                       std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("sample_lambda: k must be >= 2");
  if (q <= 0.0 || q > 1.0)
    throw std::invalid_argument("sample_lambda: q must lie in (0,1]");
  auto rng = make_stream(seed, StreamTag::sampler);
  WeightedInteractionGraph w;
  w.k = k;
  const std::size_t m = pair_count(k);
  w.weight.resize(m);
  w.activation.assign(m, 0);
  w.phase.assign(m, EdgePhase::si);
  for (auto& x : w.weight) x = sample_geometric(rng, q);
  return w;
}

ParticleGraph sample_er(std::int32_t k, double q_hat, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("sample_er: k must be positive");
  if (q_hat < 0.0 || q_hat > 1.0)
    throw std::invalid_argument("sample_er: q_hat must lie in [0,1]");
  auto rng = make_stream(seed, StreamTag::sampler);
  ParticleGraph pg;
  pg.k = k;
  for (std::int32_t i = 0; i < k; ++i)
    for (std::int32_t j = i + 1; j < k; ++j)
      if (bernoulli(rng, q_hat)) pg.edges.emplace_back(i, j);
  return pg;
}

double first_visit_pmf(std::int64_t t, double p_v) {
  return p_v * std::exp(-static_cast<double>(t + 1) * std::log1p(p_v));
}

}  // namespace epiwalk::theory

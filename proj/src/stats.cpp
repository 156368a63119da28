#include "epiwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epiwalk::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / xs.size();
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("stddev: need >= 2 samples");
  double m = mean(xs), acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / (xs.size() - 1));
}

MeanCi mean_ci(std::span<const double> xs) {
  MeanCi ci;
  ci.mean = mean(xs);
  double half = 1.959963984540054 * sample_stddev(xs) / std::sqrt(double(xs.size()));
  ci.lo = ci.mean - half;
  ci.hi = ci.mean + half;
  return ci;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("ks_critical_value: empty sample");
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("ks_critical_value: alpha in (0,1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(double(n));
}

KsResult ks_geometric(std::span<const std::int64_t> samples, double q,
                      double alpha) {
  if (samples.size() < 100)
    throw std::invalid_argument(
        "ks_geometric: need at least 100 samples for a meaningful test");
  if (q <= 0.0 || q > 1.0)
    throw std::invalid_argument("ks_geometric: q must lie in (0,1]");

  std::vector<std::int64_t> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  if (xs.front() < 1)
    throw std::invalid_argument("ks_geometric: samples must be >= 1");

  const double n = static_cast<double>(xs.size());
  const double log1mq = std::log1p(-q);
  // Geom(q) on {1,2,...}: F(t) = 1 - (1-q)^t.
  auto cdf = [&](std::int64_t t) {
    return t <= 0 ? 0.0 : -std::expm1(static_cast<double>(t) * log1mq);
  };

  // Both CDFs are step functions on the integers; the sup is attained at an
  // atom (from above) or just below one (from below).
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const std::int64_t v = xs[i];
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(j) / n;
    d = std::max(d, std::abs(above - cdf(v)));
    d = std::max(d, std::abs(below - cdf(v - 1)));
    i = j;
  }

  KsResult res;
  res.statistic = d;
  res.n = xs.size();
  res.critical_value = ks_critical_value(xs.size(), alpha);
  res.pass = d < res.critical_value;
  return res;
}

}  // namespace epiwalk::stats

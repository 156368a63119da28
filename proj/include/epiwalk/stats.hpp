#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace epiwalk::stats {

double mean(std::span<const double> xs);
double median(std::vector<double> xs);  // by value: sorts a copy
double sample_stddev(std::span<const double> xs);

struct MeanCi {
  double mean = 0.0, lo = 0.0, hi = 0.0;  // normal-approximation 95% interval
};
MeanCi mean_ci(std::span<const double> xs);

// Asymptotic two-sided Kolmogorov critical value sqrt(-ln(alpha/2)/2)/sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

struct KsResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool pass = false;
  std::size_t n = 0;
};

// Two-sided KS test of integer samples against Geom(q) on {1, 2, ...},
// exact CDF comparison at the atoms. Requires >= 100 samples (advisory
// error below that). Conservative for discrete data, as usual.
KsResult ks_geometric(std::span<const std::int64_t> samples, double q,
                      double alpha = 0.01);

}  // namespace epiwalk::stats

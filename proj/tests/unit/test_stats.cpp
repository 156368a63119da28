#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "epiwalk/stats.hpp"
#include "epiwalk/theory.hpp"

using namespace epiwalk;

TEST_CASE("summary statistics basics") {
  std::vector<double> xs{1, 2, 3, 4, 100};
  CHECK(stats::mean(xs) == doctest::Approx(22.0));
  CHECK(stats::median(xs) == doctest::Approx(3.0));
  CHECK(stats::median({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(2.5));
  auto ci = stats::mean_ci(xs);
  CHECK(ci.lo < ci.mean);
  CHECK(ci.hi > ci.mean);
  CHECK_THROWS(stats::mean(std::vector<double>{}));
}

TEST_CASE("ks critical value formula") {
  CHECK(stats::ks_critical_value(100, 0.05) ==
        doctest::Approx(std::sqrt(-0.5 * std::log(0.025)) / 10.0));
  CHECK(stats::ks_critical_value(2000, 0.01) ==
        doctest::Approx(1.6276 / std::sqrt(2000.0)).epsilon(1e-3));
}

TEST_CASE("ks accepts true geometric samples") {
  auto lam = theory::sample_lambda(64, 0.02, 5);  // 2016 i.i.d. Geom(0.02)
  auto res = stats::ks_geometric(lam.weight, 0.02, 0.01);
  CHECK(res.n == 2016);
  CHECK(res.pass);
}

TEST_CASE("ks rejects a degenerate sample") {
  std::vector<std::int64_t> ones(500, 1);
  auto res = stats::ks_geometric(ones, 0.001, 0.01);
  CHECK_FALSE(res.pass);
  CHECK(res.statistic > 0.9);
}

TEST_CASE("ks advisory error below 100 samples") {
  std::vector<std::int64_t> few(50, 3);
  CHECK_THROWS_AS(stats::ks_geometric(few, 0.1, 0.01), std::invalid_argument);
}

TEST_CASE("ks distinguishes a wrong rate") {
  auto lam = theory::sample_lambda(64, 0.02, 6);
  auto res = stats::ks_geometric(lam.weight, 0.04, 0.01);  // rate off by 2x
  CHECK_FALSE(res.pass);
}

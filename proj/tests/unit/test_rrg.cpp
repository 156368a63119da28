#include <doctest.h>

#include <stdexcept>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

#include "epiwalk/rrg.hpp"

using namespace epiwalk;

namespace {

RegularGraph petersen() {
  RegularGraph g;
  g.n = 10;
  g.r = 3;
  g.adj.resize(30);
  for (std::int32_t i = 0; i < 5; ++i) {
    std::int32_t* outer = g.adj.data() + 3 * i;
    outer[0] = (i + 1) % 5;
    outer[1] = (i + 4) % 5;
    outer[2] = i + 5;
    std::int32_t* inner = g.adj.data() + 3 * (i + 5);
    inner[0] = 5 + (i + 2) % 5;
    inner[1] = 5 + (i + 3) % 5;
    inner[2] = i;
  }
  validate_regular(g);
  return g;
}

// Brute-force spectral oracle: full dense eigendecomposition.
double dense_lambda2(const RegularGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n, g.n);
  for (std::int32_t v = 0; v < g.n; ++v)
    for (std::int32_t u : g.neighbors(v)) a(v, u) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return es.eigenvalues()[g.n - 2];  // ascending order; second largest
}

}  // namespace

TEST_CASE("n=4 r=3 is the complete graph K4 for any seed") {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    auto g = generate_regular(4, 3, seed);
    for (std::int32_t v = 0; v < 4; ++v) {
      std::set<std::int32_t> nb(g.neighbors(v).begin(), g.neighbors(v).end());
      CHECK(nb.size() == 3);
      CHECK(nb.count(v) == 0);
    }
  }
}

TEST_CASE("generator rejects invalid parameters") {
  CHECK_THROWS_AS(generate_regular(1001, 3, 1), std::invalid_argument);  // odd n*r
  CHECK_THROWS_AS(generate_regular(10, 2, 1), std::invalid_argument);    // r < 3
  CHECK_THROWS_AS(generate_regular(3, 3, 1), std::invalid_argument);     // n <= r
}

TEST_CASE("identical seed reproduces an identical graph") {
  auto a = generate_regular(2000, 3, 77);
  auto b = generate_regular(2000, 3, 77);
  CHECK(a.adj == b.adj);
  auto c = generate_regular(2000, 3, 78);
  CHECK(a.adj != c.adj);
}

TEST_CASE("generated graphs are simple and exactly regular") {
  for (auto [n, r] : {std::pair{1000, 4}, std::pair{500, 5}, std::pair{300, 3}}) {
    auto g = generate_regular(n, r, 13);
    CHECK_NOTHROW(validate_regular(g));
  }
}

TEST_CASE("second eigenvalue on known spectra") {
  // K4: eigenvalues {3, -1, -1, -1}
  auto k4 = generate_regular(4, 3, 1);
  CHECK(second_eigenvalue(k4, 1e-10) == doctest::Approx(-1.0).epsilon(1e-9));

  // K33: {3, 0, 0, 0, 0, -3}
  RegularGraph k33;
  k33.n = 6;
  k33.r = 3;
  for (std::int32_t v = 0; v < 3; ++v)
    for (std::int32_t u = 3; u < 6; ++u) k33.adj.push_back(u);
  for (std::int32_t v = 3; v < 6; ++v)
    for (std::int32_t u = 0; u < 3; ++u) k33.adj.push_back(u);
  CHECK(std::abs(second_eigenvalue(k33, 1e-10)) < 1e-9);

  // Petersen: {3, 1 (x5), -2 (x4)}
  auto p = petersen();
  CHECK(dense_lambda2(p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(second_eigenvalue(p, 1e-10) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lanczos matches the dense oracle on a random graph") {
  auto g = generate_regular(200, 3, 4242);
  REQUIRE(is_connected(g));
  CHECK(second_eigenvalue(g, 1e-9) ==
        doctest::Approx(dense_lambda2(g)).epsilon(1e-7));
}

TEST_CASE("top eigenpair: adjacency times uniform equals r") {
  auto g = generate_regular(500, 3, 9);
  for (std::int32_t v = 0; v < g.n; ++v) {
    double row_sum = 0.0;
    for (std::int32_t u : g.neighbors(v)) {
      (void)u;
      row_sum += 1.0;
    }
    CHECK(row_sum == doctest::Approx(3.0));
  }
}

TEST_CASE("shortest cycle through a vertex") {
  auto k4 = generate_regular(4, 3, 1);
  for (std::int32_t v = 0; v < 4; ++v) {
    auto c = shortest_cycle_through(k4, v, 3);
    REQUIRE(c.has_value());
    CHECK(*c == 3);
  }
  auto p = petersen();  // girth 5
  for (std::int32_t v = 0; v < 10; ++v) {
    CHECK_FALSE(shortest_cycle_through(p, v, 4).has_value());
    auto c = shortest_cycle_through(p, v, 5);
    REQUIRE(c.has_value());
    CHECK(*c == 5);
  }
}

TEST_CASE("typicality on K4 with eps1 = 0.1") {
  auto k4 = generate_regular(4, 3, 1);
  TypicalityOptions opts;
  opts.eps1 = 0.1;
  auto rep = check_typical(k4, opts);
  CHECK(rep.connected);
  CHECK_FALSE(rep.bipartite);
  CHECK(rep.l1 == 0);  // floor(0.1 * log_3 4)
  CHECK(rep.treelike_fraction == doctest::Approx(1.0));
  CHECK(rep.small_cycle_vertex_count == 0);
  CHECK_FALSE(rep.p4_violation);
}

TEST_CASE("typicality rejects 2-regular input and bad parameters") {
  RegularGraph c6;
  c6.n = 6;
  c6.r = 2;
  for (std::int32_t v = 0; v < 6; ++v) {
    c6.adj.push_back((v + 1) % 6);
    c6.adj.push_back((v + 5) % 6);
  }
  CHECK_THROWS_AS(check_typical(c6), std::invalid_argument);

  auto k4 = generate_regular(4, 3, 1);
  TypicalityOptions bad;
  bad.eps1 = 1.5;
  CHECK_THROWS_AS(check_typical(k4, bad), std::invalid_argument);
  bad = {};
  bad.sample_size = 99;
  CHECK_THROWS_AS(check_typical(k4, bad), std::invalid_argument);
}

TEST_CASE("typical random graph at n = 2000") {
  auto g = generate_regular(2000, 3, 31);
  auto rep = check_typical(g);
  CHECK(rep.connected);
  CHECK_FALSE(rep.bipartite);
  CHECK(rep.lambda2 < 2.0 * std::sqrt(2.0) + 0.1);
  CHECK(rep.l1 == 1);
  // P3 bound n^{2 eps1} and the non-treelike bound O(n^{3 eps1 - 1}).
  CHECK(rep.small_cycle_vertex_count <= std::pow(2000.0, 0.5));
  CHECK(rep.treelike_fraction >= 1.0 - std::pow(2000.0, 3 * 0.25 - 1.0));
  CHECK_FALSE(rep.p4_violation);
}

TEST_CASE("treelike fraction via sampling stays close to exact") {
  auto g = generate_regular(1000, 3, 8);
  auto exact = check_typical(g);
  TypicalityOptions opts;
  opts.sample_size = 400;
  auto sampled = check_typical(g, opts);
  CHECK(std::abs(sampled.treelike_fraction - exact.treelike_fraction) < 0.05);
  CHECK(exact.treelike_fraction >= 1.0 - std::pow(1000.0, -0.25));
}

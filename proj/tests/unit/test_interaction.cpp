#include <doctest.h>

#include <stdexcept>

#include <algorithm>

#include "epiwalk/interaction.hpp"
#include "epiwalk/rrg.hpp"

using namespace epiwalk;

namespace {

const std::vector<Interaction> kAppendixEvents = {
    {9, 0, 1}, {11, 0, 3}, {18, 1, 2}, {22, 2, 3},
    {27, 2, 3}, {100, 0, 2}, {100, 1, 3}};

}  // namespace

TEST_CASE("pair index round-trips") {
  const std::int32_t k = 7;
  std::size_t idx = 0;
  for (std::int32_t i = 0; i < k; ++i)
    for (std::int32_t j = i + 1; j < k; ++j) {
      CHECK(pair_index(k, i, j) == idx);
      CHECK(pair_index(k, j, i) == idx);
      auto [a, b] = pair_from_index(k, idx);
      CHECK(a == i);
      CHECK(b == j);
      ++idx;
    }
  CHECK(idx == pair_count(k));
}

TEST_CASE("appendix weight table from the interaction sequence") {
  auto wig = upsilon_from_interactions(4, kAppendixEvents, {0});
  CHECK(wig.weight_of(0, 1) == 9);
  CHECK(wig.weight_of(0, 2) == 100);
  CHECK(wig.weight_of(0, 3) == 11);
  CHECK(wig.weight_of(1, 2) == 9);
  CHECK(wig.weight_of(1, 3) == 91);
  CHECK(wig.weight_of(2, 3) == 11);
  CHECK(wig.fully_resolved());

  SUBCASE("thresholding at 10 isolates particle d") {
    auto pg = threshold(wig, 10);
    REQUIRE(pg.edges.size() == 2);
    CHECK(pg.edges[0] == std::pair<std::int32_t, std::int32_t>{0, 1});
    CHECK(pg.edges[1] == std::pair<std::int32_t, std::int32_t>{1, 2});
    auto comps = components(pg);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<std::int32_t>{0, 1, 2});
    CHECK(comps[1] == std::vector<std::int32_t>{3});
  }

  SUBCASE("weighted distances reproduce the SI infection times") {
    std::vector<std::int32_t> sources{0};
    auto d = weighted_distances(wig, sources);
    CHECK(d == std::vector<std::int64_t>{0, 9, 18, 11});
  }
}

TEST_CASE("threshold edge cases") {
  auto wig = upsilon_from_interactions(4, kAppendixEvents, {0});
  CHECK(threshold(wig, 0).edges.empty());  // weights are >= 1
  CHECK(threshold(wig, kXiInfinite).edges.size() == pair_count(4));

  wig.weight[pair_index(4, 1, 3)] = kUnresolved;
  CHECK_THROWS_WITH_AS(threshold(wig, 10), "threshold: edge (1,3) unresolved",
                       std::runtime_error);
}

TEST_CASE("components on degenerate particle graphs") {
  ParticleGraph complete;
  complete.k = 5;
  for (std::int32_t i = 0; i < 5; ++i)
    for (std::int32_t j = i + 1; j < 5; ++j) complete.edges.emplace_back(i, j);
  auto one = components(complete);
  REQUIRE(one.size() == 1);
  CHECK(one[0].size() == 5);

  ParticleGraph empty;
  empty.k = 4;
  CHECK(components(empty).size() == 4);
}

TEST_CASE("weighted distances: trivial cases") {
  auto wig = upsilon_from_interactions(
      2, std::vector<Interaction>{{42, 0, 1}}, {0});
  std::vector<std::int32_t> src0{0};
  CHECK(weighted_distances(wig, src0) == std::vector<std::int64_t>{0, 42});
  std::vector<std::int32_t> all{0, 1};
  CHECK(weighted_distances(wig, all) == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("upsilon: two particles, one edge, weight equals completion time") {
  auto g = generate_regular(300, 3, 15);
  SimOptions opts;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto [wig, trace] = build_upsilon(g, 2, opts, seed);
    REQUIRE_FALSE(trace.censored);
    CHECK(wig.activation_of(0, 1) == 0);
    REQUIRE(trace.tk.has_value());
    CHECK(wig.weight_of(0, 1) == *trace.tk);
  }
}

TEST_CASE("time-distance lemma holds exactly on simulated upsilon graphs") {
  auto g = generate_regular(500, 3, 21);
  std::vector<std::int32_t> sources{0};
  for (double rho : {1.0, 0.5}) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      SimOptions opts;
      opts.rho = rho;
      opts.record_interactions = true;
      auto [wig, trace] = build_upsilon(g, 6, opts, seed);
      REQUIRE_FALSE(trace.censored);
      auto d = weighted_distances(wig, sources);
      for (std::int32_t x = 0; x < 6; ++x) CHECK(d[x] == trace.infected_at[x]);

      // Triangle property: |t(x) - t(y)| <= w(x,y) on every edge.
      for (std::int32_t i = 0; i < 6; ++i)
        for (std::int32_t j = i + 1; j < 6; ++j) {
          std::int64_t w = wig.weight_of(i, j);
          CHECK(std::abs(trace.infected_at[i] - trace.infected_at[j]) <= w);
        }

      // The engine's online bookkeeping must agree with the pure
      // reconstruction from the recorded interaction sequence.
      auto oracle = upsilon_from_interactions(6, trace.interactions, sources);
      CHECK(oracle.weight == wig.weight);
      CHECK(oracle.activation == wig.activation);
    }
  }
}

TEST_CASE("psi equals upsilon when xi outlasts every weight") {
  auto g = generate_regular(400, 3, 33);
  SimOptions si;
  SimOptions sir;
  sir.xi = 1000000;  // far beyond any edge weight at this scale
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto [ups, si_trace] = build_upsilon(g, 5, si, seed);
    auto [psi, sir_trace] = build_psi(g, 5, sir, seed);
    REQUIRE_FALSE(si_trace.censored);
    REQUIRE_FALSE(sir_trace.censored);
    CHECK(sir_trace.mk == 5);
    CHECK(psi.weight == ups.weight);
    CHECK(psi.activation == ups.activation);
  }
}

TEST_CASE("psi phase tags separate infected edges from survivor edges") {
  auto g = generate_regular(400, 3, 51);
  SimOptions opts;
  opts.xi = 10;  // tiny window: most particles survive phase 1
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto [wig, trace] = build_psi(g, 5, opts, seed);
    REQUIRE_FALSE(trace.censored);
    CHECK(wig.fully_resolved());
    for (std::int32_t i = 0; i < 5; ++i)
      for (std::int32_t j = i + 1; j < 5; ++j) {
        bool i_infected = trace.infected_at[i] != kNever;
        bool j_infected = trace.infected_at[j] != kNever;
        auto tag = wig.phase[pair_index(5, i, j)];
        if (i_infected || j_infected) {
          CHECK(tag == EdgePhase::phase1);
          CHECK(wig.activation_of(i, j) ==
                std::min(i_infected ? trace.infected_at[i] : kUnreachable,
                         j_infected ? trace.infected_at[j] : kUnreachable));
        } else {
          CHECK(tag == EdgePhase::phase2);
        }
        CHECK(wig.weight_of(i, j) >= 1);
      }
  }
}

TEST_CASE("infect-component lemma holds exactly on simulated psi graphs") {
  auto g = generate_regular(500, 3, 60);
  for (double rho : {1.0, 0.5}) {
    for (std::int64_t xi : {30LL, 200LL, 2000LL}) {
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SimOptions opts;
        opts.rho = rho;
        opts.xi = xi;
        auto [wig, trace] = build_psi(g, 6, opts, seed);
        REQUIRE_FALSE(trace.censored);
        auto comps = components(threshold(wig, xi));
        std::vector<char> predicted(6, 0);
        for (const auto& comp : comps) {
          bool has_initial =
              std::find(comp.begin(), comp.end(), 0) != comp.end();
          if (has_initial)
            for (auto v : comp) predicted[v] = 1;
        }
        for (std::int32_t x = 0; x < 6; ++x)
          CHECK((trace.infected_at[x] != kNever) == (predicted[x] != 0));

        // Phase-respecting distances: infection times equal shortest path
        // over the thresholded weights.
        std::vector<std::int32_t> sources{0};
        auto d = weighted_distances(wig, sources, xi);
        for (std::int32_t x = 0; x < 6; ++x) {
          if (trace.infected_at[x] == kNever) {
            CHECK(d[x] == kUnreachable);
          } else {
            CHECK(d[x] == trace.infected_at[x]);
          }
        }
      }
    }
  }
}

TEST_CASE("interaction graph JSON round-trip") {
  auto g = generate_regular(300, 3, 70);
  SimOptions opts;
  opts.xi = 50;
  auto [wig, trace] = build_psi(g, 4, opts, 3);
  auto back = interaction_graph_from_json(wig.to_json());
  CHECK(back.k == wig.k);
  CHECK(back.weight == wig.weight);
  CHECK(back.activation == wig.activation);
  CHECK(back.phase == wig.phase);
  CHECK(back.censored == wig.censored);

  auto pg = threshold(wig, 50);
  CHECK(pg.to_json().find("\"edges\"") != std::string::npos);
}

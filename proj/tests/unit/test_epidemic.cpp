#include <doctest.h>

#include <stdexcept>
#include <sstream>

#include "epiwalk/epidemic.hpp"
#include "epiwalk/rrg.hpp"

using namespace epiwalk;

TEST_CASE("status is a pure function of infection time and xi") {
  // Infected at 0 with xi = 1: infectious exactly at t = 0, recovered from 1.
  CHECK(status_at(kNever, 1, 100) == Status::S);
  CHECK(status_at(0, 1, 0) == Status::I);
  CHECK(status_at(0, 1, 1) == Status::R);
  CHECK(status_at(5, 3, 4) == Status::S);
  CHECK(status_at(5, 3, 7) == Status::I);
  CHECK(status_at(5, 3, 8) == Status::R);
  CHECK(status_at(5, kXiInfinite, 1000000) == Status::I);
}

TEST_CASE("infection boundary: a meeting at t = t_x + xi still infects") {
  // Rule 2 evaluates against I(t-1), so chains survive even at xi = 1.
  CHECK(can_infect_at(0, 1, 1));
  CHECK_FALSE(can_infect_at(0, 1, 2));
  CHECK(can_infect_at(10, 5, 15));
  CHECK_FALSE(can_infect_at(10, 5, 16));
  CHECK_FALSE(can_infect_at(10, 5, 10));  // same-step infections do not chain
  CHECK_FALSE(can_infect_at(kNever, 5, 3));
  CHECK(can_infect_at(0, kXiInfinite, 1000000));
}

TEST_CASE("scripted schedule reproduces the four-particle chain") {
  enum { A, B, C, D };
  const std::vector<ScheduledInteraction> schedule = {
      {A, B, 9},  {A, D, 11}, {B, C, 18}, {C, D, 22},
      {C, D, 27}, {A, C, 100}, {B, D, 100}};

  SUBCASE("xi = 10 infects everyone along a->b->c->d") {
    auto tr = run_scripted(4, schedule, 10, {A});
    CHECK(tr.mk == 4);
    CHECK(tr.infected_at == std::vector<std::int64_t>{0, 9, 18, 22});
    REQUIRE(tr.tk.has_value());
    CHECK(*tr.tk == 22);
  }

  SUBCASE("xi = 1 infects nobody else") {
    auto tr = run_scripted(4, schedule, 1, {A});
    CHECK(tr.mk == 1);
    CHECK_FALSE(tr.tk.has_value());
  }

  SUBCASE("empty schedule leaves only the initial infectives") {
    auto tr = run_scripted(4, {}, 10, {A, C});
    CHECK(tr.mk == 2);
    CHECK_FALSE(tr.tk.has_value());
  }
}

TEST_CASE("infections are not transitive within a time step") {
  // x meets y and z; x interacts with y only at step 5, y-z also interact at
  // 5. y is infected at 5 but cannot pass it to z until a later interaction.
  const std::vector<ScheduledInteraction> schedule = {
      {0, 1, 5}, {1, 2, 5}, {1, 2, 7}};
  auto tr = run_scripted(3, schedule, kXiInfinite, {0});
  CHECK(tr.infected_at[1] == 5);
  CHECK(tr.infected_at[2] == 7);
  CHECK(tr.mk == 3);
}

TEST_CASE("recovery boundary in scripted runs") {
  SUBCASE("interaction exactly at t_x + xi infects") {
    auto tr = run_scripted(2, {{0, 1, 5}}, 5, {0});
    CHECK(tr.mk == 2);
  }
  SUBCASE("one step later does not") {
    auto tr = run_scripted(2, {{0, 1, 6}}, 5, {0});
    CHECK(tr.mk == 1);
  }
  SUBCASE("xi = 1 pair meeting at step 5 never infects") {
    auto tr = run_scripted(2, {{0, 1, 5}}, 1, {0});
    CHECK(tr.mk == 1);
    CHECK(tr.infected_at[1] == kNever);
  }
}

TEST_CASE("scripted schedule validation") {
  CHECK_THROWS_AS(run_scripted(2, {{0, 1, 5}, {0, 1, 3}}, 1, {0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_scripted(2, {{0, 0, 5}}, 1, {0}), std::invalid_argument);
  CHECK_THROWS_AS(run_scripted(2, {{0, 1, 5}}, 1, {}), std::invalid_argument);
  CHECK_THROWS_AS(run_scripted(2, {{0, 1, 0}}, 1, {0}), std::invalid_argument);
}

TEST_CASE("SI on a connected graph infects everyone, deterministically") {
  auto g = generate_regular(200, 3, 3);
  SimOptions opts;
  opts.rho = 0.5;
  auto a = run_epidemic(g, 4, opts, 12);
  auto b = run_epidemic(g, 4, opts, 12);
  CHECK(a.mk == 4);
  CHECK_FALSE(a.censored);
  CHECK(a.infected_at == b.infected_at);
  CHECK(a.tk == b.tk);
  REQUIRE(a.interactions.size() == b.interactions.size());
  for (std::size_t i = 0; i < a.interactions.size(); ++i) {
    CHECK(a.interactions[i].step == b.interactions[i].step);
    CHECK(a.interactions[i].a == b.interactions[i].a);
    CHECK(a.interactions[i].b == b.interactions[i].b);
  }
}

TEST_CASE("two particles with rho = 1: completion at the first meeting") {
  auto g = generate_regular(300, 3, 8);
  SimOptions opts;
  opts.record_interactions = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto tr = run_epidemic(g, 2, opts, seed);
    REQUIRE_FALSE(tr.censored);
    CHECK(tr.mk == 2);
    REQUIRE(tr.tk.has_value());
    REQUIRE_FALSE(tr.interactions.empty());
    CHECK(*tr.tk == tr.interactions.front().step);
  }
}

TEST_CASE("ever-infected counts are monotone and recoveries absorbing") {
  auto g = generate_regular(300, 3, 4);
  SimOptions opts;
  opts.xi = 40;
  opts.rho = 1.0;
  auto tr = run_epidemic(g, 6, opts, 5);
  // Every recorded infection time is consistent with some infector being
  // inside its infectious window at that step.
  for (std::int32_t x = 0; x < 6; ++x) {
    std::int64_t t = tr.infected_at[x];
    if (t == kNever || t == 0) continue;
    bool witnessed = false;
    for (std::int32_t y = 0; y < 6; ++y)
      if (y != x && can_infect_at(tr.infected_at[y], opts.xi, t))
        witnessed = true;
    CHECK(witnessed);
  }
  if (tr.tk) CHECK(tr.mk > 1);
}

TEST_CASE("max_steps censors a live run") {
  auto g = generate_regular(2000, 3, 5);
  SimOptions opts;
  opts.rho = 0.01;
  opts.max_steps = 5;
  auto tr = run_epidemic(g, 3, opts, 6);
  CHECK(tr.censored);
  CHECK(tr.mk == 1);
}

TEST_CASE("bad epidemic parameters are rejected") {
  auto g = generate_regular(50, 3, 5);
  SimOptions opts;
  opts.rho = 0.0;
  CHECK_THROWS_AS(run_epidemic(g, 3, opts, 1), std::invalid_argument);
  opts = {};
  opts.initial_infectives = {};
  CHECK_THROWS_AS(run_epidemic(g, 3, opts, 1), std::invalid_argument);
  opts = {};
  opts.xi = 0;
  CHECK_THROWS_AS(run_epidemic(g, 3, opts, 1), std::invalid_argument);
  opts = {};
  opts.initial_infectives = {7};
  CHECK_THROWS_AS(run_epidemic(g, 3, opts, 1), std::invalid_argument);
}

TEST_CASE("trace JSON round-trip") {
  auto g = generate_regular(100, 3, 10);
  SimOptions opts;
  opts.xi = 25;
  opts.record_interactions = true;
  auto tr = run_epidemic(g, 4, opts, 77);
  auto back = trace_from_json(tr.to_json());
  CHECK(back.infected_at == tr.infected_at);
  CHECK(back.mk == tr.mk);
  CHECK(back.tk == tr.tk);
  CHECK(back.xi == tr.xi);
  CHECK(back.censored == tr.censored);
  CHECK(back.interactions.size() == tr.interactions.size());
  CHECK(back.seed == tr.seed);
}

TEST_CASE("trajectory dump emits one CSV row per particle per step") {
  auto g = generate_regular(100, 3, 10);
  SimOptions opts;
  opts.max_steps = 7;
  opts.rho = 0.001;  // keep the run censored at exactly max_steps
  std::ostringstream dump;
  opts.trajectory_dump = &dump;
  auto tr = run_epidemic(g, 3, opts, 4);
  CHECK(tr.censored);
  std::istringstream is(dump.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "step,particle,vertex");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  CHECK(rows == 3 * 8);  // initial positions plus 7 steps
}

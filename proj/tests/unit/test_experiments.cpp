#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "epiwalk/experiments.hpp"
#include "epiwalk/rrg.hpp"
#include "epiwalk/theory.hpp"

using namespace epiwalk;

TEST_CASE("regime classification from phi") {
  ExperimentConfig cfg;
  cfg.k = 200;
  cfg.phi_target = 0.5;
  CHECK(classify_regime(cfg) == "subcritical");
  cfg.phi_target = 2.0;
  CHECK(classify_regime(cfg) == "supercritical");  // 2 < 2 ln 200
  cfg.phi_target = 3.0 * std::log(200.0);
  CHECK(classify_regime(cfg) == "full");
}

TEST_CASE("experiment config JSON round-trip with overrides") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::regimes;
  cfg.n = 1234;
  cfg.rho = 0.7;
  cfg.xi = 55;
  cfg.phi_target = 1.5;
  cfg.trials = 9;
  auto j = config_to_json(cfg);
  auto back = config_from_json(j);
  CHECK(back.kind == cfg.kind);
  CHECK(back.n == cfg.n);
  CHECK(back.rho == cfg.rho);
  CHECK(back.xi == cfg.xi);
  CHECK(back.phi_target == cfg.phi_target);
  CHECK(back.trials == cfg.trials);

  auto partial = config_from_json(nlohmann::json{{"n", 77}, {"xi", nullptr}});
  CHECK(partial.n == 77);
  CHECK(partial.xi == kXiInfinite);
  CHECK(partial.r == 3);  // untouched defaults survive
}

TEST_CASE("trial summary JSONL round-trip") {
  TrialSummary s;
  s.seed = 42;
  s.mk = 7;
  s.tk = 123;
  s.good_weights = true;
  s.lemma_time_distance = true;
  s.largest_component = 4;
  auto line = s.to_json_line();
  auto back = trial_summary_from_json(line);
  CHECK(back.seed == s.seed);
  CHECK(back.mk == s.mk);
  CHECK(back.tk == s.tk);
  CHECK(back.good_weights == s.good_weights);
  CHECK(back.lemma_time_distance == s.lemma_time_distance);
  CHECK_FALSE(back.lemma_infect_component.has_value());
  CHECK(back.largest_component == s.largest_component);
  CHECK_FALSE(back.meeting_time.has_value());
}

TEST_CASE("experiments are reproducible and thread-count independent") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::lemma_audit;
  cfg.n = 500;
  cfg.k = 5;
  cfg.rho = 0.5;
  cfg.xi = 400;
  cfg.trials = 8;
  cfg.base_seed = 77;

  auto a = run_experiment(cfg);
  auto b = run_experiment(cfg);
  CHECK(a.trials_jsonl() == b.trials_jsonl());
  CHECK(a.aggregate == b.aggregate);

  cfg.threads = 4;
  auto c = run_experiment(cfg);
  CHECK(c.trials_jsonl() == a.trials_jsonl());
}

TEST_CASE("summary aggregates recompute from serialized trial lines") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::regimes;
  cfg.n = 500;
  cfg.k = 6;
  cfg.xi = 300;
  cfg.trials = 10;
  cfg.base_seed = 5;
  auto out = run_experiment(cfg);

  std::vector<TrialSummary> parsed;
  std::istringstream is(out.trials_jsonl());
  for (std::string line; std::getline(is, line);)
    parsed.push_back(trial_summary_from_json(line));
  auto recomputed = summarize_trials(parsed);
  CHECK(recomputed["mean_mk"] == out.aggregate["mean_mk"]);
  CHECK(recomputed["mk_histogram"] == out.aggregate["mk_histogram"]);
  CHECK(recomputed["censored"] == out.aggregate["censored"]);
}

TEST_CASE("meeting-time experiment lands near theta_r n") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::meeting_time;
  cfg.n = 1000;
  cfg.k = 2;
  cfg.trials = 300;
  cfg.base_seed = 3;
  auto out = run_experiment(cfg);
  double mean = out.aggregate.value("mean_meeting_time", 0.0);
  CHECK(std::abs(mean - 2000.0) / 2000.0 < 0.2);
  CHECK(out.aggregate.value("censored", std::size_t{9}) == 0);
}

TEST_CASE("interaction law is exact at rho = 1 and near psi at rho = 0.5") {
  ExperimentConfig gcfg;
  gcfg.n = 2000;
  gcfg.base_seed = 8;
  auto g = experiment_graph(gcfg);

  auto certain = measure_interaction_law(g, 1.0, 200, 150, 4);
  CHECK(certain.fraction == doctest::Approx(1.0));

  auto half = measure_interaction_law(g, 0.5, 200, 600, 4);
  CHECK(std::abs(half.fraction - 2.0 / 3.0) < 0.08);
}

TEST_CASE("er_compare aggregate carries both sides of the bridge") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::er_compare;
  cfg.n = 600;
  cfg.k = 12;
  cfg.phi_target = 2.0;
  cfg.trials = 25;
  cfg.er_samples = 2000;
  cfg.base_seed = 15;
  auto out = run_experiment(cfg);
  CHECK(out.aggregate.contains("mean_lcc_psi"));
  CHECK(out.aggregate.contains("mean_lcc_er"));
  double ratio = out.aggregate.value("lcc_ratio", 0.0);
  CHECK(ratio > 0.6);
  CHECK(ratio < 1.6);
  CHECK(out.xi_used >= 1);
}

TEST_CASE("weight_fit pools enough weights for the KS gate") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::weight_fit;
  cfg.n = 1000;
  cfg.k = 8;
  cfg.trials = 6;
  cfg.base_seed = 19;
  auto out = run_experiment(cfg);
  CHECK(out.aggregate.value("pooled_weights", 0) == 6 * 28);
  CHECK(out.aggregate.contains("ks"));
}

TEST_CASE("trial errors are recorded, not thrown") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::completion;
  cfg.n = 10;
  cfg.k = 10;
  cfg.alpha = 5.0;  // impossible placement
  cfg.trials = 3;
  auto out = run_experiment(cfg);
  CHECK(out.trials.size() == 3);
  for (const auto& t : out.trials) CHECK(t.error.has_value());
  CHECK(out.aggregate.value("errors", std::size_t{0}) == 3);
}

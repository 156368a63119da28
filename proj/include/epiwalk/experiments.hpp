#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "epiwalk/epidemic.hpp"
#include "epiwalk/graph.hpp"
#include "epiwalk/interaction.hpp"

namespace epiwalk {

enum class ExperimentKind {
  meeting_time,  // two-walk first-meeting law
  completion,    // SI completion time T_k
  regimes,       // SIR outbreak sizes at a phi target
  weight_fit,    // pooled Upsilon edge weights vs Geom(q)
  lemma_audit,   // exact per-trial structural checks
  er_compare,    // f_xi(Psi) components vs direct G_{k,q_hat}
};

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::lemma_audit;
  std::int32_t n = 5000;
  std::int32_t r = 3;
  std::int32_t k = 20;
  double rho = 1.0;
  std::int64_t xi = kXiInfinite;
  std::optional<double> phi_target;  // when set, xi is inverted from phi
  std::int32_t trials = 1;
  std::uint64_t base_seed = 1;
  double alpha = 1.0;
  int placement_retries = 200;
  std::int64_t max_steps = 0;   // 0 = module default policy
  std::int64_t burn_in = 200;   // meeting_time only
  std::int32_t er_samples = 10000;  // er_compare only
  int threads = 0;              // 0 = hardware concurrency
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct TrialSummary {
  std::uint64_t seed = 0;
  std::int64_t mk = -1;
  std::optional<std::int64_t> tk;
  bool censored = false;
  std::optional<bool> good_weights;
  std::optional<bool> lemma_time_distance;
  std::optional<bool> lemma_infect_component;
  std::optional<std::int32_t> largest_component;
  std::optional<std::int64_t> meeting_time;
  std::optional<std::string> error;

  std::string to_json_line() const;
};
TrialSummary trial_summary_from_json(const std::string& line);

struct ExperimentResult {
  ExperimentConfig cfg;
  std::int64_t xi_used = kXiInfinite;
  std::vector<TrialSummary> trials;  // seed order
  nlohmann::json aggregate;

  std::string trials_jsonl() const;
};

// Runs cfg.trials independent trials with seeds base_seed + i on a shared
// graph, in parallel; results are merged in seed order so the output is
// independent of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Deterministic experiment graph: generated from base_seed, retrying the
// seed until connected and non-bipartite (all but guaranteed first try).
RegularGraph experiment_graph(const ExperimentConfig& cfg);

// Regime label from the phi threshold parameter: < 1 subcritical, up to
// (1+eps) ln k supercritical, beyond that full.
std::string classify_regime(const ExperimentConfig& cfg, double eps = 1.0);

// Fraction of fresh two-walk meetings that produce an interaction within
// `window` steps. A meeting is fresh when no coincidence occurred in the
// preceding `window` steps.
struct InteractionLawResult {
  double fraction = 0.0;
  std::int64_t meetings = 0;
};
InteractionLawResult measure_interaction_law(const RegularGraph& g, double rho,
                                             std::int64_t window,
                                             std::int64_t min_meetings,
                                             std::uint64_t seed);

// Summary-level aggregate statistics, recomputable from serialized
// TrialSummary lines alone.
nlohmann::json summarize_trials(const std::vector<TrialSummary>& trials);

}  // namespace epiwalk

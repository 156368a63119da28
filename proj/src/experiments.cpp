#include "epiwalk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "epiwalk/rrg.hpp"
#include "epiwalk/stats.hpp"
#include "epiwalk/theory.hpp"
#include "epiwalk/walker.hpp"

namespace epiwalk {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::meeting_time: return "meeting_time";
    case ExperimentKind::completion: return "completion";
    case ExperimentKind::regimes: return "regimes";
    case ExperimentKind::weight_fit: return "weight_fit";
    case ExperimentKind::lemma_audit: return "lemma_audit";
    case ExperimentKind::er_compare: return "er_compare";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto kind : {ExperimentKind::meeting_time, ExperimentKind::completion,
                    ExperimentKind::regimes, ExperimentKind::weight_fit,
                    ExperimentKind::lemma_audit, ExperimentKind::er_compare})
    if (name == to_string(kind)) return kind;
  throw std::invalid_argument("unknown experiment kind: " + name);
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("kind")) cfg.kind = experiment_kind_from_string(j.at("kind"));
  if (j.contains("n")) cfg.n = j.at("n").get<std::int32_t>();
  if (j.contains("r")) cfg.r = j.at("r").get<std::int32_t>();
  if (j.contains("k")) cfg.k = j.at("k").get<std::int32_t>();
  if (j.contains("rho")) cfg.rho = j.at("rho").get<double>();
  if (j.contains("xi"))
    cfg.xi = j.at("xi").is_null() ? kXiInfinite : j.at("xi").get<std::int64_t>();
  if (j.contains("phi") && !j.at("phi").is_null())
    cfg.phi_target = j.at("phi").get<double>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<std::int32_t>();
  if (j.contains("seed")) cfg.base_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  if (j.contains("placement_retries"))
    cfg.placement_retries = j.at("placement_retries").get<int>();
  if (j.contains("max_steps")) cfg.max_steps = j.at("max_steps").get<std::int64_t>();
  if (j.contains("burn_in")) cfg.burn_in = j.at("burn_in").get<std::int64_t>();
  if (j.contains("er_samples"))
    cfg.er_samples = j.at("er_samples").get<std::int32_t>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["kind"] = to_string(cfg.kind);
  j["n"] = cfg.n;
  j["r"] = cfg.r;
  j["k"] = cfg.k;
  j["rho"] = cfg.rho;
  j["xi"] = cfg.xi == kXiInfinite ? json() : json(cfg.xi);
  j["phi"] = cfg.phi_target ? json(*cfg.phi_target) : json();
  j["trials"] = cfg.trials;
  j["seed"] = cfg.base_seed;
  j["alpha"] = cfg.alpha;
  j["placement_retries"] = cfg.placement_retries;
  j["max_steps"] = cfg.max_steps;
  j["burn_in"] = cfg.burn_in;
  j["er_samples"] = cfg.er_samples;
  return j;
}

std::string TrialSummary::to_json_line() const {
  json j;
  j["seed"] = seed;
  j["mk"] = mk;
  j["tk"] = tk ? json(*tk) : json();
  j["censored"] = censored;
  j["good_weights"] = good_weights ? json(*good_weights) : json();
  j["lemma_time_distance"] =
      lemma_time_distance ? json(*lemma_time_distance) : json();
  j["lemma_infect_component"] =
      lemma_infect_component ? json(*lemma_infect_component) : json();
  j["largest_component"] = largest_component ? json(*largest_component) : json();
  j["meeting_time"] = meeting_time ? json(*meeting_time) : json();
  j["error"] = error ? json(*error) : json();
  return j.dump();
}

TrialSummary trial_summary_from_json(const std::string& line) {
  json j = json::parse(line);
  TrialSummary s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.mk = j.at("mk").get<std::int64_t>();
  if (!j.at("tk").is_null()) s.tk = j.at("tk").get<std::int64_t>();
  s.censored = j.at("censored").get<bool>();
  if (!j.at("good_weights").is_null())
    s.good_weights = j.at("good_weights").get<bool>();
  if (!j.at("lemma_time_distance").is_null())
    s.lemma_time_distance = j.at("lemma_time_distance").get<bool>();
  if (!j.at("lemma_infect_component").is_null())
    s.lemma_infect_component = j.at("lemma_infect_component").get<bool>();
  if (!j.at("largest_component").is_null())
    s.largest_component = j.at("largest_component").get<std::int32_t>();
  if (!j.at("meeting_time").is_null())
    s.meeting_time = j.at("meeting_time").get<std::int64_t>();
  if (!j.at("error").is_null()) s.error = j.at("error").get<std::string>();
  return s;
}

std::string ExperimentResult::trials_jsonl() const {
  std::string out;
  for (const auto& t : trials) {
    out += t.to_json_line();
    out += '\n';
  }
  return out;
}

RegularGraph experiment_graph(const ExperimentConfig& cfg) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    RegularGraph g = generate_regular(
        cfg.n, cfg.r, cfg.base_seed + 0xace1ULL * attempt);
    if (is_connected(g) && !is_bipartite(g)) return g;
  }
  throw std::runtime_error("experiment_graph: no typical graph in 16 attempts");
}

std::string classify_regime(const ExperimentConfig& cfg, double eps) {
  double phi = cfg.phi_target
                   ? *cfg.phi_target
                   : theory::phi_threshold(cfg.k, cfg.n, cfg.r, cfg.rho, cfg.xi);
  if (phi < 1.0) return "subcritical";
  if (phi <= (1.0 + eps) * std::log(static_cast<double>(cfg.k)))
    return "supercritical";
  return "full";
}

namespace {

SimOptions sim_options(const ExperimentConfig& cfg, std::int64_t xi) {
  SimOptions opts;
  opts.rho = cfg.rho;
  opts.xi = xi;
  opts.initial_infectives = {0};
  opts.max_steps = cfg.max_steps;
  opts.alpha = cfg.alpha;
  opts.placement_retries = cfg.placement_retries;
  opts.record_interactions = false;
  return opts;
}

bool good_weights(const WeightedInteractionGraph& w, std::int32_t n,
                  std::int32_t k) {
  long double sum = 0.0;
  std::int64_t mx = 0;
  for (std::int64_t z : w.weight) {
    if (z == kUnresolved) continue;
    sum += z;
    mx = std::max(mx, z);
  }
  const long double cap_sum =
      static_cast<long double>(k) * k * n * std::log(static_cast<double>(n));
  const double cap_each = std::pow(static_cast<double>(n), 1.5);
  return sum <= cap_sum && static_cast<double>(mx) < cap_each;
}

// Exact structural checks for an SI trial: infection time equals weighted
// interaction-graph distance from the initial infectives, for every particle.
bool audit_time_distance(const WeightedInteractionGraph& w,
                         const EpidemicTrace& trace,
                         const std::vector<std::int32_t>& initial) {
  auto dist = weighted_distances(w, initial);
  for (std::int32_t x = 0; x < trace.k; ++x) {
    std::int64_t t = trace.infected_at[x];
    if (t == kNever || dist[x] == kUnreachable || dist[x] != t) return false;
  }
  return true;
}

// Exact structural checks for an SIR trial against f_xi(Psi): the infected
// set is the union of threshold components containing initial infectives,
// and infection times equal distances over the thresholded weights.
std::pair<bool, bool> audit_sir(const WeightedInteractionGraph& w,
                                const EpidemicTrace& trace, std::int64_t xi,
                                const std::vector<std::int32_t>& initial,
                                std::int32_t* largest_out) {
  ParticleGraph pg = threshold(w, xi);
  auto comps = components(pg);
  std::vector<char> predicted(trace.k, 0), is_initial(trace.k, 0);
  for (std::int32_t s : initial) is_initial[s] = 1;
  std::int32_t largest = 0;
  for (const auto& comp : comps) {
    largest = std::max(largest, static_cast<std::int32_t>(comp.size()));
    bool has_initial = false;
    for (std::int32_t v : comp) has_initial |= is_initial[v] != 0;
    if (has_initial)
      for (std::int32_t v : comp) predicted[v] = 1;
  }
  if (largest_out) *largest_out = largest;

  bool infect_component_ok = true;
  for (std::int32_t x = 0; x < trace.k; ++x)
    if ((trace.infected_at[x] != kNever) != (predicted[x] != 0))
      infect_component_ok = false;

  auto dist = weighted_distances(w, initial, xi);
  bool time_distance_ok = true;
  for (std::int32_t x = 0; x < trace.k; ++x) {
    std::int64_t t = trace.infected_at[x];
    if (t == kNever) {
      if (dist[x] != kUnreachable) time_distance_ok = false;
    } else if (dist[x] != t) {
      time_distance_ok = false;
    }
  }
  return {time_distance_ok, infect_component_ok};
}

TrialSummary run_trial(const ExperimentConfig& cfg, std::int64_t xi,
                       const RegularGraph& g, std::uint64_t seed) {
  TrialSummary s;
  s.seed = seed;
  switch (cfg.kind) {
    case ExperimentKind::meeting_time: {
      WalkState walk = init_uniform(g, 2, seed);
      std::int64_t cap = cfg.max_steps > 0
                             ? cfg.max_steps
                             : 50 * static_cast<std::int64_t>(
                                        theory::theta(cfg.r) * cfg.n);
      for (std::int64_t t = 0; t < cfg.burn_in; ++t) advance(walk, g);
      std::int64_t met = kNever;
      while (walk.step - cfg.burn_in < cap) {
        advance(walk, g);
        if (walk.positions[0] == walk.positions[1]) {
          met = walk.step - cfg.burn_in;
          break;
        }
      }
      if (met == kNever) {
        s.censored = true;
      } else {
        s.meeting_time = met;
      }
      break;
    }
    case ExperimentKind::completion: {
      auto opts = sim_options(cfg, kXiInfinite);
      auto trace = run_epidemic(g, cfg.k, opts, seed);
      s.mk = trace.mk;
      s.tk = trace.tk;
      s.censored = trace.censored;
      break;
    }
    case ExperimentKind::regimes: {
      auto opts = sim_options(cfg, xi);
      auto trace = run_epidemic(g, cfg.k, opts, seed);
      s.mk = trace.mk;
      s.tk = trace.tk;
      s.censored = trace.censored;
      break;
    }
    case ExperimentKind::weight_fit: {
      auto opts = sim_options(cfg, kXiInfinite);
      auto [wig, trace] = build_upsilon(g, cfg.k, opts, seed);
      s.mk = trace.mk;
      s.tk = trace.tk;
      s.censored = trace.censored;
      s.good_weights = good_weights(wig, cfg.n, cfg.k);
      break;
    }
    case ExperimentKind::lemma_audit: {
      auto opts = sim_options(cfg, xi);
      if (xi == kXiInfinite) {
        auto [wig, trace] = build_upsilon(g, cfg.k, opts, seed);
        s.mk = trace.mk;
        s.tk = trace.tk;
        s.censored = trace.censored;
        s.good_weights = good_weights(wig, cfg.n, cfg.k);
        if (!trace.censored) {
          s.lemma_time_distance =
              audit_time_distance(wig, trace, opts.initial_infectives);
          s.largest_component = cfg.k;  // threshold at infinity is complete
        }
      } else {
        auto [wig, trace] = build_psi(g, cfg.k, opts, seed);
        s.mk = trace.mk;
        s.tk = trace.tk;
        s.censored = trace.censored;
        s.good_weights = good_weights(wig, cfg.n, cfg.k);
        if (!trace.censored) {
          std::int32_t largest = 0;
          auto [td, ic] =
              audit_sir(wig, trace, xi, opts.initial_infectives, &largest);
          s.lemma_time_distance = td;
          s.lemma_infect_component = ic;
          s.largest_component = largest;
        }
      }
      break;
    }
    case ExperimentKind::er_compare: {
      auto opts = sim_options(cfg, xi);
      auto [wig, trace] = build_psi(g, cfg.k, opts, seed);
      s.mk = trace.mk;
      s.tk = trace.tk;
      s.censored = trace.censored;
      if (!trace.censored) {
        auto comps = components(threshold(wig, xi));
        std::size_t largest = 0;
        for (const auto& c : comps) largest = std::max(largest, c.size());
        s.largest_component = static_cast<std::int32_t>(largest);
      }
      break;
    }
  }
  return s;
}

// Pooled resolved edge weights, for the distribution-fit aggregate.
std::vector<std::int64_t> collect_weights(const ExperimentConfig& cfg,
                                          const RegularGraph& g,
                                          std::uint64_t seed) {
  auto opts = sim_options(cfg, kXiInfinite);
  auto [wig, trace] = build_upsilon(g, cfg.k, opts, seed);
  std::vector<std::int64_t> ws;
  for (std::int64_t z : wig.weight)
    if (z != kUnresolved) ws.push_back(z);
  return ws;
}

}  // namespace

InteractionLawResult measure_interaction_law(const RegularGraph& g, double rho,
                                             std::int64_t window,
                                             std::int64_t min_meetings,
                                             std::uint64_t seed) {
  WalkState walk = init_uniform(g, 2, seed);
  auto rho_rng = make_stream(seed, StreamTag::interaction);
  std::int64_t last_coincidence = -window - 1;
  std::int64_t meetings = 0, hits = 0;
  while (meetings < min_meetings) {
    advance(walk, g);
    if (walk.positions[0] != walk.positions[1]) continue;
    if (walk.step - last_coincidence > window) {
      // Fresh meeting: watch the next `window` steps for an interaction.
      ++meetings;
      bool interacted = false;
      std::int64_t start = walk.step;
      last_coincidence = walk.step;
      for (std::int64_t t = 0; t < window; ++t) {
        if (walk.positions[0] == walk.positions[1]) {
          last_coincidence = walk.step;
          if (!interacted && bernoulli(rho_rng, rho)) interacted = true;
        }
        if (t + 1 < window) advance(walk, g);
      }
      (void)start;
      if (interacted) ++hits;
    } else {
      last_coincidence = walk.step;
    }
  }
  return {static_cast<double>(hits) / meetings, meetings};
}

json summarize_trials(const std::vector<TrialSummary>& trials) {
  json j;
  std::size_t censored = 0, errors = 0;
  std::vector<double> mks, tks, meets;
  std::map<std::int64_t, std::int64_t> hist;
  for (const auto& t : trials) {
    if (t.error) {
      ++errors;
      continue;
    }
    if (t.censored) ++censored;
    if (t.mk >= 0) {
      mks.push_back(static_cast<double>(t.mk));
      ++hist[t.mk];
    }
    if (t.tk) tks.push_back(static_cast<double>(*t.tk));
    if (t.meeting_time) meets.push_back(static_cast<double>(*t.meeting_time));
  }
  j["trials"] = trials.size();
  j["censored"] = censored;
  j["errors"] = errors;
  if (!mks.empty()) {
    j["mean_mk"] = stats::mean(mks);
    j["median_mk"] = stats::median(mks);
    json h = json::object();
    for (auto& [mk, c] : hist) h[std::to_string(mk)] = c;
    j["mk_histogram"] = std::move(h);
  }
  if (!tks.empty()) {
    j["mean_tk"] = stats::mean(tks);
    j["median_tk"] = stats::median(tks);
    if (tks.size() >= 2) {
      auto ci = stats::mean_ci(tks);
      j["tk_ci"] = {ci.lo, ci.hi};
    }
  }
  if (!meets.empty()) {
    j["mean_meeting_time"] = stats::mean(meets);
    j["median_meeting_time"] = stats::median(meets);
    if (meets.size() >= 2) {
      auto ci = stats::mean_ci(meets);
      j["meeting_time_ci"] = {ci.lo, ci.hi};
    }
  }
  return j;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1)
    throw std::invalid_argument("run_experiment: trials must be >= 1");

  ExperimentResult res;
  res.cfg = cfg;
  res.xi_used = cfg.phi_target
                    ? theory::xi_for_phi(*cfg.phi_target, cfg.k, cfg.n, cfg.r,
                                         cfg.rho)
                    : cfg.xi;

  RegularGraph g = experiment_graph(cfg);

  res.trials.resize(cfg.trials);
  std::atomic<std::int32_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::int32_t i = next.fetch_add(1);
      if (i >= cfg.trials) break;
      std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
      try {
        res.trials[i] = run_trial(cfg, res.xi_used, g, seed);
      } catch (const std::exception& e) {
        TrialSummary s;
        s.seed = seed;
        s.error = e.what();
        res.trials[i] = s;
      }
    }
  };
  unsigned hw = std::thread::hardware_concurrency();
  unsigned n_workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : (hw ? hw : 1);
  n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(cfg.trials));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregate: summary stats plus the closed-form predictions alongside.
  json agg = summarize_trials(res.trials);
  agg["config"] = config_to_json(cfg);
  agg["xi_used"] = res.xi_used == kXiInfinite ? json() : json(res.xi_used);
  agg["regime"] = classify_regime(cfg);
  json th;
  th["psi"] = theory::psi(cfg.rho, cfg.r);
  th["theta_r"] = theory::theta(cfg.r);
  th["q"] = theory::edge_rate(cfg.n, cfg.r, cfg.rho);
  th["q_hat"] = theory::edge_probability(cfg.n, cfg.r, cfg.rho, res.xi_used);
  const double phi =
      theory::phi_threshold(cfg.k, cfg.n, cfg.r, cfg.rho, res.xi_used);
  th["phi"] = phi;
  th["phi_target"] = cfg.phi_target ? json(*cfg.phi_target) : json();
  th["c_pred"] = phi > 1.0 && res.xi_used != kXiInfinite
                     ? json(theory::giant_fraction(phi))
                     : json();
  th["t_pred"] = theory::completion_prediction(cfg.n, cfg.k, cfg.r, cfg.rho);
  agg["theory"] = std::move(th);

  switch (cfg.kind) {
    case ExperimentKind::meeting_time: {
      std::vector<std::int64_t> meets;
      for (const auto& t : res.trials)
        if (t.meeting_time) meets.push_back(*t.meeting_time);
      agg["theory_mean_meeting"] = theory::theta(cfg.r) * cfg.n;
      if (meets.size() >= 100) {
        auto ks = stats::ks_geometric(
            meets, 1.0 / (theory::theta(cfg.r) * cfg.n), 0.01);
        agg["ks"] = {{"statistic", ks.statistic},
                     {"critical_value", ks.critical_value},
                     {"pass", ks.pass},
                     {"n", ks.n}};
      }
      break;
    }
    case ExperimentKind::completion: {
      agg["prediction"] = theory::completion_prediction(cfg.n, cfg.k, cfg.r,
                                                        cfg.rho);
      if (agg.contains("median_tk"))
        agg["median_over_prediction"] =
            agg["median_tk"].get<double>() / agg["prediction"].get<double>();
      break;
    }
    case ExperimentKind::regimes: {
      if (phi > 1.0) {
        const double c_pred = theory::giant_fraction(phi);
        const double cut = c_pred * cfg.k / 2.0;
        std::int64_t large = 0, usable = 0;
        double cond_sum = 0.0;
        std::int64_t full = 0;
        for (const auto& t : res.trials) {
          if (t.error || t.mk < 0) continue;
          ++usable;
          if (t.mk == cfg.k) ++full;
          if (static_cast<double>(t.mk) >= cut) {
            ++large;
            cond_sum += static_cast<double>(t.mk) / cfg.k;
          }
        }
        agg["large_outbreak_cut"] = cut;
        agg["frac_large"] = usable ? static_cast<double>(large) / usable : 0.0;
        agg["cond_mean_fraction"] = large ? cond_sum / large : 0.0;
        agg["frac_all_infected"] =
            usable ? static_cast<double>(full) / usable : 0.0;
      } else {
        std::int64_t usable = 0, full = 0;
        for (const auto& t : res.trials) {
          if (t.error || t.mk < 0) continue;
          ++usable;
          if (t.mk == cfg.k) ++full;
        }
        agg["frac_all_infected"] =
            usable ? static_cast<double>(full) / usable : 0.0;
      }
      break;
    }
    case ExperimentKind::weight_fit: {
      std::vector<std::int64_t> pooled;
      for (std::int32_t i = 0; i < cfg.trials; ++i) {
        if (res.trials[i].error || res.trials[i].censored) continue;
        auto ws = collect_weights(cfg, g, cfg.base_seed + i);
        pooled.insert(pooled.end(), ws.begin(), ws.end());
      }
      agg["pooled_weights"] = pooled.size();
      if (pooled.size() >= 100) {
        auto ks = stats::ks_geometric(
            pooled, theory::edge_rate(cfg.n, cfg.r, cfg.rho), 0.01);
        agg["ks"] = {{"statistic", ks.statistic},
                     {"critical_value", ks.critical_value},
                     {"pass", ks.pass},
                     {"n", ks.n}};
      }
      break;
    }
    case ExperimentKind::lemma_audit: {
      std::int64_t uncensored = 0, td_ok = 0, ic_ok = 0, ic_total = 0,
                   good = 0;
      for (const auto& t : res.trials) {
        if (t.error || t.censored) continue;
        ++uncensored;
        if (t.good_weights && *t.good_weights) ++good;
        if (t.lemma_time_distance && *t.lemma_time_distance) ++td_ok;
        if (t.lemma_infect_component) {
          ++ic_total;
          if (*t.lemma_infect_component) ++ic_ok;
        }
      }
      agg["uncensored"] = uncensored;
      agg["time_distance_ok"] = td_ok;
      agg["infect_component_checked"] = ic_total;
      agg["infect_component_ok"] = ic_ok;
      agg["good_weight_trials"] = good;
      agg["all_exact"] = uncensored > 0 && td_ok == uncensored &&
                         ic_ok == ic_total;
      break;
    }
    case ExperimentKind::er_compare: {
      std::vector<double> lcc;
      for (const auto& t : res.trials)
        if (t.largest_component) lcc.push_back(*t.largest_component);
      if (!lcc.empty()) agg["mean_lcc_psi"] = stats::mean(lcc);
      const double q_hat =
          theory::edge_probability(cfg.n, cfg.r, cfg.rho, res.xi_used);
      std::vector<double> er_lcc;
      er_lcc.reserve(cfg.er_samples);
      for (std::int32_t i = 0; i < cfg.er_samples; ++i) {
        auto pg = theory::sample_er(cfg.k, q_hat,
                                    cfg.base_seed * 0x9e3779b9ULL + i);
        std::size_t largest = 0;
        for (const auto& c : components(pg)) largest = std::max(largest, c.size());
        er_lcc.push_back(static_cast<double>(largest));
      }
      agg["mean_lcc_er"] = stats::mean(er_lcc);
      agg["er_samples"] = cfg.er_samples;
      if (!lcc.empty())
        agg["lcc_ratio"] =
            stats::mean(lcc) / std::max(1e-12, stats::mean(er_lcc));
      break;
    }
  }
  res.aggregate = std::move(agg);
  return res;
}

}  // namespace epiwalk

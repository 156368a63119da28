#include "epiwalk/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "epiwalk/experiments.hpp"
#include "epiwalk/rrg.hpp"
#include "epiwalk/stats.hpp"
#include "epiwalk/theory.hpp"

namespace epiwalk::acceptance {

namespace {

std::int32_t scaled(std::int32_t trials, double scale) {
  return std::max<std::int32_t>(2, static_cast<std::int32_t>(
                                       std::lround(trials * scale)));
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

}  // namespace

CriterionResult lemma_audit(std::uint64_t seed, double scale) {
  CriterionResult res;
  res.id = 1;
  res.name = "exact lemma audit (t(x)=d(x), infected set = f_xi components)";
  struct Block {
    double rho;
    std::int64_t xi;
  };
  // SI both interaction probabilities, SIR across sub/super/near-full phi.
  const Block blocks[] = {{1.0, kXiInfinite}, {0.5, kXiInfinite}, {1.0, 500},
                          {1.0, 2000},        {1.0, 8000},        {0.5, 3000},
                          {0.5, 12000}};
  std::int64_t uncensored = 0, td_ok = 0, ic_checked = 0, ic_ok = 0, good = 0,
               errors = 0;
  std::string jsonl;
  int block_id = 0;
  for (const auto& b : blocks) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::lemma_audit;
    cfg.n = 5000;
    cfg.r = 3;
    cfg.k = 20;
    cfg.rho = b.rho;
    cfg.xi = b.xi;
    cfg.trials = scaled(72, scale);
    cfg.base_seed = seed + 100000ULL * block_id++;
    cfg.placement_retries = 1000;
    auto out = run_experiment(cfg);
    jsonl += out.trials_jsonl();
    for (const auto& t : out.trials) {
      if (t.error) {
        ++errors;
        continue;
      }
      if (t.censored) continue;
      ++uncensored;
      if (t.good_weights.value_or(false)) ++good;
      if (t.lemma_time_distance && *t.lemma_time_distance) ++td_ok;
      if (t.lemma_infect_component) {
        ++ic_checked;
        if (*t.lemma_infect_component) ++ic_ok;
      }
    }
  }
  const std::int64_t needed =
      static_cast<std::int64_t>(std::lround(500 * scale));
  res.pass = uncensored >= std::max<std::int64_t>(needed, 1) &&
             td_ok == uncensored && ic_ok == ic_checked && errors == 0;
  res.detail = std::to_string(uncensored) + " uncensored trials; t(x)=d(x) ok " +
               std::to_string(td_ok) + "/" + std::to_string(uncensored) +
               "; component lemma ok " + std::to_string(ic_ok) + "/" +
               std::to_string(ic_checked) + "; good-weight flags " +
               std::to_string(good) + "/" + std::to_string(uncensored);
  res.jsonl = std::move(jsonl);
  return res;
}

CriterionResult appendix_regression() {
  CriterionResult res;
  res.id = 2;
  res.name = "scripted schedule: SIR chain infects d, SI thresholding isolates d";
  enum { A, B, C, D };
  const std::vector<ScheduledInteraction> schedule = {
      {A, B, 9}, {A, D, 11}, {B, C, 18},  {C, D, 22},
      {C, D, 27}, {A, C, 100}, {B, D, 100}};

  auto trace = run_scripted(4, schedule, 10, {A});
  bool chain_ok = trace.mk == 4 && trace.infected_at[A] == 0 &&
                  trace.infected_at[B] == 9 && trace.infected_at[C] == 18 &&
                  trace.infected_at[D] == 22;

  std::vector<Interaction> events;
  for (const auto& ev : schedule) events.push_back({ev.step, ev.a, ev.b});
  auto wig = upsilon_from_interactions(4, events, {A});
  const std::int64_t expected[][3] = {{A, B, 9},  {A, C, 100}, {A, D, 11},
                                      {B, C, 9},  {B, D, 91},  {C, D, 11}};
  bool weights_ok = true;
  for (const auto& e : expected)
    weights_ok &= wig.weight_of(static_cast<std::int32_t>(e[0]),
                                static_cast<std::int32_t>(e[1])) == e[2];

  auto comps = components(threshold(wig, 10));
  bool isolated_ok = comps.size() == 2;
  if (isolated_ok) {
    std::vector<std::int32_t> abc = {A, B, C}, d = {D};
    isolated_ok = (comps[0] == abc && comps[1] == d) ||
                  (comps[0] == d && comps[1] == abc);
  }

  res.pass = chain_ok && weights_ok && isolated_ok;
  res.detail = std::string("chain a->b->c->d ") + (chain_ok ? "ok" : "FAIL") +
               "; weight table " + (weights_ok ? "ok" : "FAIL") +
               "; threshold(10) isolates d " + (isolated_ok ? "ok" : "FAIL");
  return res;
}

CriterionResult meeting_time_law(std::uint64_t seed, double scale) {
  CriterionResult res;
  res.id = 3;
  res.name = "pairwise meeting time ~ Geom(1/(theta_r n))";
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::meeting_time;
  cfg.n = 10000;
  cfg.r = 3;
  cfg.k = 2;
  cfg.trials = scaled(2000, scale);
  cfg.base_seed = seed;
  cfg.burn_in = 200;
  auto out = run_experiment(cfg);
  const double target = theory::theta(cfg.r) * cfg.n;
  double mean = out.aggregate.value("mean_meeting_time", 0.0);
  bool ks_pass = out.aggregate.contains("ks") &&
                 out.aggregate["ks"]["pass"].get<bool>();
  double ks_stat = out.aggregate.contains("ks")
                       ? out.aggregate["ks"]["statistic"].get<double>()
                       : 1.0;
  double ks_crit = out.aggregate.contains("ks")
                       ? out.aggregate["ks"]["critical_value"].get<double>()
                       : 0.0;
  const double rel = std::abs(mean - target) / target;
  std::size_t censored = out.aggregate.value("censored", std::size_t{0});
  res.pass = rel <= 0.05 && ks_pass && censored == 0;
  res.detail = "mean " + fmt(mean, 1) + " vs " + fmt(target, 1) + " (" +
               fmt(100 * rel, 2) + "% off, tol 5%); KS " + fmt(ks_stat, 4) +
               " < " + fmt(ks_crit, 4) + (ks_pass ? " ok" : " FAIL");
  res.jsonl = out.trials_jsonl();
  return res;
}

CriterionResult interaction_law(std::uint64_t seed, double scale) {
  CriterionResult res;
  res.id = 4;
  res.name = "interaction within 200 steps of a meeting = psi(rho,3)";
  ExperimentConfig gcfg;
  gcfg.n = 10000;
  gcfg.r = 3;
  gcfg.base_seed = seed;
  RegularGraph g = experiment_graph(gcfg);
  const double rho = 0.5;
  const std::int64_t meetings = std::max<std::int64_t>(200, std::llround(6000 * scale));
  auto law = measure_interaction_law(g, rho, 200, meetings, seed);
  const double target = theory::psi(rho, 3);
  res.pass = std::abs(law.fraction - target) <= 0.02;
  res.detail = "fraction " + fmt(law.fraction) + " vs psi=" + fmt(target) +
               " +-0.02 over " + std::to_string(law.meetings) + " meetings";
  return res;
}

CriterionResult two_particle_identity() {
  CriterionResult res;
  res.id = 5;
  res.name = "1 - phi_T(1-f)/(1-phi_T f) identity equals psi";
  double worst = 0.0;
  for (int ri = 3; ri <= 10; ++ri)
    for (int pi = 1; pi <= 10; ++pi) {
      double rho = pi / 10.0;
      auto chain = theory::two_particle_chain(rho, ri);
      worst = std::max(worst, std::abs(chain.psi_check - theory::psi(rho, ri)));
    }
  res.pass = worst <= 1e-12;
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << worst;
  res.detail = "max |1-phi_T - psi| = " + os.str() + " over 80-point grid";
  return res;
}

CriterionResult completion_time(std::uint64_t seed, double scale) {
  CriterionResult res;
  res.id = 6;
  res.name = "SI completion time matches 2 theta_r n ln k/(psi k)";
  bool all_ok = true;
  std::string detail;
  std::string jsonl;
  int idx = 0;
  for (double rho : {1.0, 0.5}) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::completion;
    cfg.n = 5000;
    cfg.r = 3;
    cfg.k = 50;
    cfg.rho = rho;
    cfg.trials = scaled(200, scale);
    cfg.base_seed = seed + 50000ULL * idx++;
    cfg.alpha = 0.25;
    cfg.placement_retries = 1000;
    auto out = run_experiment(cfg);
    jsonl += out.trials_jsonl();
    const double pred = theory::completion_prediction(cfg.n, cfg.k, cfg.r, rho);
    const double med = out.aggregate.value("median_tk", 0.0);
    const double rel = std::abs(med - pred) / pred;
    bool ok = rel <= 0.20;
    all_ok &= ok;
    if (!detail.empty()) detail += "; ";
    detail += "rho=" + fmt(rho, 1) + ": median " + fmt(med, 1) + " vs " +
              fmt(pred, 1) + " (" + fmt(100 * rel, 1) + "% off, tol 20%)";
  }
  res.pass = all_ok;
  res.detail = detail;
  res.jsonl = std::move(jsonl);
  return res;
}

CriterionResult regimes(std::uint64_t seed, double scale) {
  CriterionResult res;
  res.id = 7;
  res.name = "outbreak regimes at phi = 0.5, 2, 3 ln k";
  const std::int32_t k = 200;
  const double lnk = std::log(static_cast<double>(k));
  bool all_ok = true;
  std::string detail, jsonl;
  int idx = 0;
  for (double phi : {0.5, 2.0, 3.0 * lnk}) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::regimes;
    cfg.n = 20000;
    cfg.r = 3;
    cfg.k = k;
    cfg.rho = 1.0;
    cfg.phi_target = phi;
    cfg.trials = scaled(300, scale);
    cfg.base_seed = seed + 300000ULL * idx++;
    cfg.alpha = 0.25;
    cfg.placement_retries = 1000;
    auto out = run_experiment(cfg);
    jsonl += out.trials_jsonl();

    std::int64_t usable = 0;
    std::vector<std::int64_t> mks;
    for (const auto& t : out.trials) {
      if (t.error || t.mk < 0) continue;
      ++usable;
      mks.push_back(t.mk);
    }
    if (!detail.empty()) detail += "; ";
    if (phi < 1.0) {
      const double cut = 4.0 * lnk;
      std::int64_t small = std::count_if(mks.begin(), mks.end(), [&](auto m) {
        return static_cast<double>(m) <= cut;
      });
      double frac = usable ? static_cast<double>(small) / usable : 0.0;
      bool ok = frac >= 0.95;
      all_ok &= ok;
      detail += "phi=0.5: M_k<=" + std::to_string(static_cast<int>(cut)) +
                " in " + fmt(100 * frac, 1) + "% (need 95%)";
    } else if (phi < 3.0) {
      const double c_pred = theory::giant_fraction(phi);
      const double cut = c_pred * k / 2.0;
      std::int64_t large = 0;
      double cond = 0.0;
      for (auto m : mks)
        if (static_cast<double>(m) >= cut) {
          ++large;
          cond += static_cast<double>(m) / k;
        }
      double frac = usable ? static_cast<double>(large) / usable : 0.0;
      double cond_mean = large ? cond / large : 0.0;
      bool ok = std::abs(frac - c_pred) <= 0.10 &&
                std::abs(cond_mean - c_pred) <= 0.10;
      all_ok &= ok;
      detail += "phi=2: large-outbreak frac " + fmt(frac) + " and cond mean " +
                fmt(cond_mean) + " vs C=" + fmt(c_pred) + " +-0.10";
    } else {
      std::int64_t full =
          std::count_if(mks.begin(), mks.end(), [&](auto m) { return m == k; });
      double frac = usable ? static_cast<double>(full) / usable : 0.0;
      bool ok = frac >= 0.90;
      all_ok &= ok;
      detail += "phi=3lnk: all infected in " + fmt(100 * frac, 1) + "% (need 90%)";
    }
  }
  res.pass = all_ok;
  res.detail = detail;
  res.jsonl = std::move(jsonl);
  return res;
}

CriterionResult er_bridge(std::uint64_t seed, double scale) {
  CriterionResult res;
  res.id = 8;
  res.name = "f_xi(Psi) components match G_{k,q_hat}; Lambda thresholding matches q_hat";
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::er_compare;
  cfg.n = 5000;
  cfg.r = 3;
  cfg.k = 30;
  cfg.rho = 1.0;
  cfg.phi_target = 2.0;
  cfg.trials = scaled(300, scale);
  cfg.base_seed = seed;
  cfg.er_samples = 10000;
  cfg.placement_retries = 1000;
  auto out = run_experiment(cfg);
  const double mean_psi = out.aggregate.value("mean_lcc_psi", 0.0);
  const double mean_er = out.aggregate.value("mean_lcc_er", 0.0);
  const double rel = std::abs(mean_psi - mean_er) / mean_er;
  bool components_ok = rel <= 0.10;

  // Per-edge presence frequency of threshold(sample_lambda) vs q_hat.
  const double q = theory::edge_rate(cfg.n, cfg.r, cfg.rho);
  const std::int64_t xi = out.xi_used;
  const double q_hat = theory::edge_probability(cfg.n, cfg.r, cfg.rho, xi);
  const std::int32_t samples =
      std::max<std::int32_t>(500, static_cast<std::int32_t>(10000 * scale));
  std::vector<std::int64_t> counts(pair_count(cfg.k), 0);
  for (std::int32_t s = 0; s < samples; ++s) {
    auto lam = theory::sample_lambda(cfg.k, q, seed + 7777ULL + s);
    auto pg = threshold(lam, xi);
    for (const auto& [a, b] : pg.edges) ++counts[pair_index(cfg.k, a, b)];
  }
  const double sigma = std::sqrt(q_hat * (1.0 - q_hat) / samples);
  double max_dev = 0.0;
  for (std::int64_t c : counts)
    max_dev = std::max(max_dev,
                       std::abs(static_cast<double>(c) / samples - q_hat));
  bool freq_ok = max_dev < 3.0 * sigma;

  res.pass = components_ok && freq_ok;
  res.detail = "mean largest component " + fmt(mean_psi, 2) + " vs E-R " +
               fmt(mean_er, 2) + " (" + fmt(100 * rel, 1) +
               "% off, tol 10%); per-edge max dev " + fmt(max_dev / sigma, 2) +
               " sigma (tol 3)";
  res.jsonl = out.trials_jsonl();
  return res;
}

CriterionResult spectral_typicality(std::uint64_t seed, double scale) {
  CriterionResult res;
  res.id = 9;
  res.name = "lambda2 <= 2 sqrt(2)+0.1 w.h.p.; connected, non-bipartite; Petersen exact";
  const int graphs = std::max(10, static_cast<int>(std::lround(100 * scale)));
  const double bound = 2.0 * std::sqrt(2.0) + 0.1;
  int spectral_ok = 0, connected_ok = 0, nonbip_ok = 0;
  for (int i = 0; i < graphs; ++i) {
    auto g = generate_regular(2000, 3, seed + i);
    bool conn = is_connected(g);
    bool bip = is_bipartite(g);
    connected_ok += conn;
    nonbip_ok += !bip;
    if (conn && second_eigenvalue(g, 1e-7) <= bound) ++spectral_ok;
  }

  // Petersen graph: outer 5-cycle, spokes, inner pentagram.
  RegularGraph petersen;
  petersen.n = 10;
  petersen.r = 3;
  petersen.adj.resize(30);
  for (std::int32_t i = 0; i < 5; ++i) {
    std::int32_t* row = petersen.adj.data() + 3 * i;
    row[0] = (i + 1) % 5;
    row[1] = (i + 4) % 5;
    row[2] = i + 5;
    std::int32_t* inner = petersen.adj.data() + 3 * (i + 5);
    inner[0] = 5 + (i + 2) % 5;
    inner[1] = 5 + (i + 3) % 5;
    inner[2] = i;
  }
  validate_regular(petersen);
  const double l2 = second_eigenvalue(petersen, 1e-10);
  bool petersen_ok = std::abs(l2 - 1.0) <= 1e-9;

  res.pass = spectral_ok >= static_cast<int>(std::ceil(0.95 * graphs)) &&
             connected_ok == graphs && nonbip_ok == graphs && petersen_ok;
  res.detail = std::to_string(spectral_ok) + "/" + std::to_string(graphs) +
               " graphs with lambda2 <= " + fmt(bound, 4) + "; connected " +
               std::to_string(connected_ok) + "/" + std::to_string(graphs) +
               "; non-bipartite " + std::to_string(nonbip_ok) + "/" +
               std::to_string(graphs) + "; Petersen lambda2 = " + fmt(l2, 10);
  return res;
}

CriterionResult weight_distribution(std::uint64_t seed, double scale) {
  CriterionResult res;
  res.id = 0;
  res.name = "pooled Upsilon edge weights fit Geom(psi/(theta_r n))";
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::weight_fit;
  cfg.n = 10000;
  cfg.r = 3;
  cfg.k = 10;
  cfg.rho = 1.0;
  cfg.trials = scaled(45, scale);
  cfg.base_seed = seed;
  auto out = run_experiment(cfg);
  bool ks_pass = out.aggregate.contains("ks") &&
                 out.aggregate["ks"]["pass"].get<bool>();
  double stat = out.aggregate.contains("ks")
                    ? out.aggregate["ks"]["statistic"].get<double>()
                    : 1.0;
  double crit = out.aggregate.contains("ks")
                    ? out.aggregate["ks"]["critical_value"].get<double>()
                    : 0.0;
  res.pass = ks_pass;
  res.detail = "KS " + fmt(stat, 4) + " vs 1% critical " + fmt(crit, 4) +
               " over " +
               std::to_string(out.aggregate.value("pooled_weights", 0)) +
               " weights";
  res.jsonl = out.trials_jsonl();
  return res;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

CriterionResult determinism(const DeterminismOptions& opts) {
  CriterionResult res;
  res.id = 10;
  res.name = "validate rerun is byte-identical";
  if (!opts.cli_path.empty()) {
    const std::string f1 = opts.scratch_dir + "/determinism_a.jsonl";
    const std::string f2 = opts.scratch_dir + "/determinism_b.jsonl";
    const std::string base = "\"" + opts.cli_path +
                             "\" validate --suite lemmas --quick --seed 4242 --out ";
    int rc1 = std::system((base + "\"" + f1 + "\" > /dev/null").c_str());
    int rc2 = std::system((base + "\"" + f2 + "\" > /dev/null").c_str());
    std::string a = read_file(f1), b = read_file(f2);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
    res.pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    res.detail = "CLI validate twice: " + std::to_string(a.size()) +
                 " bytes vs " + std::to_string(b.size()) +
                 (res.pass ? " (identical)" : " (MISMATCH)");
  } else {
    auto a = run_suite("lemmas", 4242, true, true);
    auto b = run_suite("lemmas", 4242, true, true);
    res.pass = !a.jsonl.empty() && a.jsonl == b.jsonl;
    res.detail = "in-process suite twice: " + std::to_string(a.jsonl.size()) +
                 " bytes" + (res.pass ? " (identical)" : " (MISMATCH)");
  }
  return res;
}

std::vector<CriterionResult> run_all(const DeterminismOptions& opts) {
  std::vector<CriterionResult> out;
  out.push_back(lemma_audit());
  out.push_back(appendix_regression());
  out.push_back(meeting_time_law());
  out.push_back(interaction_law());
  out.push_back(two_particle_identity());
  out.push_back(completion_time());
  out.push_back(regimes());
  out.push_back(er_bridge());
  out.push_back(spectral_typicality());
  out.push_back(determinism(opts));
  return out;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed,
                      bool seeded_explicitly, bool quick) {
  const double scale = quick ? 0.1 : 1.0;
  auto pick = [&](std::uint64_t def) { return seeded_explicitly ? seed : def; };
  SuiteReport rep;
  rep.suite = name;
  if (name == "lemmas") {
    rep.results.push_back(lemma_audit(pick(kSeedLemmas), scale));
    rep.results.push_back(appendix_regression());
    rep.results.push_back(two_particle_identity());
  } else if (name == "weights") {
    rep.results.push_back(weight_distribution(pick(kSeedWeights), scale));
  } else if (name == "meeting") {
    rep.results.push_back(meeting_time_law(pick(kSeedMeeting), scale));
    rep.results.push_back(interaction_law(pick(kSeedInteraction), scale));
  } else if (name == "completion") {
    rep.results.push_back(completion_time(pick(kSeedCompletion), scale));
  } else if (name == "er") {
    rep.results.push_back(regimes(pick(kSeedRegimes), scale));
    rep.results.push_back(er_bridge(pick(kSeedErBridge), scale));
  } else {
    throw std::invalid_argument(
        "unknown suite '" + name +
        "' (expected lemmas, weights, meeting, completion or er)");
  }
  rep.pass = true;
  for (const auto& r : rep.results) {
    rep.pass &= r.pass;
    rep.jsonl += r.jsonl;
  }
  return rep;
}

}  // namespace epiwalk::acceptance

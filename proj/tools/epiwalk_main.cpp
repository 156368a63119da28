// Command-line front end: graph generation, typicality diagnostics,
// multi-trial experiments, regime sweeps, and the validation suites.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "epiwalk/acceptance.hpp"
#include "epiwalk/experiments.hpp"
#include "epiwalk/rrg.hpp"
#include "epiwalk/theory.hpp"

namespace {

using epiwalk::ExperimentConfig;
using nlohmann::json;

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path);
  json j;
  is >> j;
  return epiwalk::config_from_json(j);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for epidemics carried by random walks "
               "on random regular graphs"};
  app.require_subcommand(1);

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a random r-regular graph");
  std::int32_t gen_n = 1000, gen_r = 3;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "graph.txt";
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--r", gen_r, "degree (>= 3)")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output graph file");
  gen->callback([&] {
    auto g = epiwalk::generate_regular(gen_n, gen_r, gen_seed);
    epiwalk::save_graph_file(g, gen_out);
    std::cout << "wrote " << gen_out << " (n=" << g.n << ", r=" << g.r << ")\n";
  });

  // --- typical -----------------------------------------------------------
  auto* typical = app.add_subcommand("typical", "typicality diagnostics P1-P4");
  std::string typ_graph;
  double typ_eps1 = 0.25, typ_eps = 0.1;
  std::int32_t typ_sample = 0;
  typical->add_option("--graph", typ_graph, "graph file")->required();
  typical->add_option("--eps1", typ_eps1, "small-cycle exponent constant");
  typical->add_option("--eps", typ_eps, "spectral slack");
  typical->add_option("--sample-size", typ_sample,
                      "treelike sample size (0 = all vertices)");
  typical->callback([&] {
    auto g = epiwalk::load_graph_file(typ_graph);
    epiwalk::TypicalityOptions opts;
    opts.eps1 = typ_eps1;
    opts.eps = typ_eps;
    opts.sample_size = typ_sample;
    auto rep = epiwalk::check_typical(g, opts);
    json j;
    j["n"] = g.n;
    j["r"] = g.r;
    j["eps1"] = typ_eps1;
    j["eps"] = typ_eps;
    j["connected"] = rep.connected;
    j["bipartite"] = rep.bipartite;
    j["lambda2"] = rep.lambda2;
    j["lambda2_bound"] = 2.0 * std::sqrt(g.r - 1.0) + typ_eps;
    j["L1"] = rep.l1;
    j["small_cycle_vertex_count"] = rep.small_cycle_vertex_count;
    j["p4_violation"] = rep.p4_violation;
    j["treelike_fraction"] = rep.treelike_fraction;
    std::cout << j.dump(2) << '\n';
  });

  // --- run ---------------------------------------------------------------
  auto* run = app.add_subcommand(
      "run", "run trials and write one TrialSummary JSON line per trial");
  std::string run_config, run_out = "results.jsonl", run_kind = "lemma_audit";
  ExperimentConfig rc;  // flag landing zone; merged with --config below
  std::int64_t run_xi = -2;
  double run_phi = -1.0;
  run->add_option("--config", run_config, "JSON config file (flags override)");
  run->add_option("--kind", run_kind,
                  "experiment kind (meeting_time, completion, regimes, "
                  "weight_fit, lemma_audit, er_compare)");
  auto* o_n = run->add_option("--n", rc.n, "vertex count");
  auto* o_r = run->add_option("--r", rc.r, "degree");
  auto* o_k = run->add_option("--k", rc.k, "particle count");
  auto* o_rho = run->add_option("--rho", rc.rho, "interaction probability");
  auto* o_xi = run->add_option("--xi", run_xi, "infectious period (-1 = SI)");
  auto* o_phi = run->add_option("--phi", run_phi, "phi target (inverts xi)");
  auto* o_trials = run->add_option("--trials", rc.trials, "trial count");
  auto* o_seed = run->add_option("--seed", rc.base_seed, "base seed");
  auto* o_alpha = run->add_option("--alpha", rc.alpha, "general-position constant");
  auto* o_steps = run->add_option("--max-steps", rc.max_steps, "step budget (0 = default)");
  auto* o_threads = run->add_option("--threads", rc.threads, "worker threads (0 = auto)");
  run->add_option("--out", run_out, "output JSONL path");
  run->callback([&] {
    ExperimentConfig cfg =
        run_config.empty() ? ExperimentConfig{} : load_config_file(run_config);
    if (run->count("--kind")) cfg.kind = epiwalk::experiment_kind_from_string(run_kind);
    if (o_n->count()) cfg.n = rc.n;
    if (o_r->count()) cfg.r = rc.r;
    if (o_k->count()) cfg.k = rc.k;
    if (o_rho->count()) cfg.rho = rc.rho;
    if (o_xi->count()) cfg.xi = run_xi < 0 ? epiwalk::kXiInfinite : run_xi;
    if (o_phi->count()) cfg.phi_target = run_phi;
    if (o_trials->count()) cfg.trials = rc.trials;
    if (o_seed->count()) cfg.base_seed = rc.base_seed;
    if (o_alpha->count()) cfg.alpha = rc.alpha;
    if (o_steps->count()) cfg.max_steps = rc.max_steps;
    if (o_threads->count()) cfg.threads = rc.threads;
    auto result = epiwalk::run_experiment(cfg);
    write_text(run_out, result.trials_jsonl());
    std::cout << result.aggregate.dump(2) << '\n';
  });

  // --- sweep -------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "regime sweep over phi targets");
  std::vector<double> sweep_phis;
  std::string sweep_config, sweep_out = "sweep.csv";
  ExperimentConfig sc;
  sc.kind = epiwalk::ExperimentKind::regimes;
  sc.n = 20000;
  sc.r = 3;
  sc.k = 200;
  sc.trials = 100;
  sc.alpha = 0.25;
  sweep->add_option("--phi-list", sweep_phis, "phi targets")
      ->required()
      ->delimiter(',');
  sweep->add_option("--config", sweep_config, "JSON config file (flags override)");
  auto* s_n = sweep->add_option("--n", sc.n, "vertex count");
  auto* s_r = sweep->add_option("--r", sc.r, "degree");
  auto* s_k = sweep->add_option("--k", sc.k, "particle count");
  auto* s_rho = sweep->add_option("--rho", sc.rho, "interaction probability");
  auto* s_trials = sweep->add_option("--trials", sc.trials, "trials per point");
  auto* s_seed = sweep->add_option("--seed", sc.base_seed, "base seed");
  auto* s_alpha = sweep->add_option("--alpha", sc.alpha, "general-position constant");
  auto* s_threads = sweep->add_option("--threads", sc.threads, "worker threads");
  sweep->add_option("--out", sweep_out, "output CSV path");
  sweep->callback([&] {
    ExperimentConfig base =
        sweep_config.empty() ? sc : load_config_file(sweep_config);
    base.kind = epiwalk::ExperimentKind::regimes;
    if (s_n->count()) base.n = sc.n;
    if (s_r->count()) base.r = sc.r;
    if (s_k->count()) base.k = sc.k;
    if (s_rho->count()) base.rho = sc.rho;
    if (s_trials->count()) base.trials = sc.trials;
    if (s_seed->count()) base.base_seed = sc.base_seed;
    if (s_alpha->count()) base.alpha = sc.alpha;
    if (s_threads->count()) base.threads = sc.threads;
    base.placement_retries = std::max(base.placement_retries, 1000);

    std::ostringstream csv;
    csv << "phi,mean_Mk,frac_large,C_pred\n";
    for (double phi : sweep_phis) {
      ExperimentConfig cfg = base;
      cfg.phi_target = phi;
      auto result = epiwalk::run_experiment(cfg);
      const double mean_mk = result.aggregate.value("mean_mk", 0.0);
      const double frac_large = result.aggregate.value("frac_large", 0.0);
      const double c_pred =
          phi > 1.0 ? epiwalk::theory::giant_fraction(phi) : 0.0;
      csv << phi << ',' << mean_mk << ',' << frac_large << ',' << c_pred << '\n';
      std::cerr << "phi=" << phi << " done (xi=" << result.xi_used << ")\n";
    }
    write_text(sweep_out, csv.str());
    std::cout << csv.str();
  });

  // --- validate ----------------------------------------------------------
  auto* validate = app.add_subcommand("validate", "run a validation suite");
  std::string suite, validate_out;
  std::uint64_t validate_seed = 0;
  bool quick = false;
  validate->add_option("--suite", suite,
                       "one of: lemmas, weights, meeting, completion, er")
      ->required();
  auto* v_seed = validate->add_option("--seed", validate_seed, "seed override");
  validate->add_flag("--quick", quick, "smoke mode with reduced trial counts");
  validate->add_option("--out", validate_out, "write per-trial JSONL here");
  validate->callback([&] {
    auto rep = epiwalk::acceptance::run_suite(suite, validate_seed,
                                              v_seed->count() > 0, quick);
    for (const auto& r : rep.results)
      std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": "
                << r.detail << '\n';
    if (!validate_out.empty()) write_text(validate_out, rep.jsonl);
    if (!rep.pass) throw CLI::RuntimeError(1);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

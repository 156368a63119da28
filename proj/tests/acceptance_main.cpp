// Acceptance gate: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cstdio>

#include "epiwalk/acceptance.hpp"

int main(int argc, char** argv) {
  epiwalk::acceptance::DeterminismOptions opts;
  if (argc > 1) opts.cli_path = argv[1];
  if (argc > 2) opts.scratch_dir = argv[2];

  bool all_pass = true;
  const auto t0 = std::chrono::steady_clock::now();
  auto run = [&](epiwalk::acceptance::CriterionResult r) {
    const auto now = std::chrono::steady_clock::now();
    const double secs =
        std::chrono::duration<double>(now - t0).count();
    std::printf("%s  [%2d] %s: %s  (t=%.0fs)\n", r.pass ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.detail.c_str(), secs);
    std::fflush(stdout);
    all_pass &= r.pass;
  };

  using namespace epiwalk::acceptance;
  run(lemma_audit());
  run(appendix_regression());
  run(meeting_time_law());
  run(interaction_law());
  run(two_particle_identity());
  run(completion_time());
  run(regimes());
  run(er_bridge());
  run(spectral_typicality());
  run(determinism(opts));

  std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "CRITERIA FAILED");
  return all_pass ? 0 : 1;
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace epiwalk::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  std::string jsonl;  // per-trial records, when the criterion runs trials
};

// Default seeds for the statistical criteria. The tolerances are inherently
// statistical, so the suite runs deterministically under pinned seeds.
inline constexpr std::uint64_t kSeedLemmas = 101;
inline constexpr std::uint64_t kSeedMeeting = 103;
inline constexpr std::uint64_t kSeedInteraction = 104;
inline constexpr std::uint64_t kSeedWeights = 105;
inline constexpr std::uint64_t kSeedCompletion = 106;
inline constexpr std::uint64_t kSeedRegimes = 107;
inline constexpr std::uint64_t kSeedErBridge = 108;
inline constexpr std::uint64_t kSeedSpectral = 109;

// scale < 1 shrinks trial counts proportionally (smoke/quick mode); the
// stated tolerances stay fixed.
CriterionResult lemma_audit(std::uint64_t seed = kSeedLemmas, double scale = 1.0);
CriterionResult appendix_regression();
CriterionResult meeting_time_law(std::uint64_t seed = kSeedMeeting,
                                 double scale = 1.0);
CriterionResult interaction_law(std::uint64_t seed = kSeedInteraction,
                                double scale = 1.0);
CriterionResult two_particle_identity();
CriterionResult completion_time(std::uint64_t seed = kSeedCompletion,
                                double scale = 1.0);
CriterionResult regimes(std::uint64_t seed = kSeedRegimes, double scale = 1.0);
CriterionResult er_bridge(std::uint64_t seed = kSeedErBridge,
                          double scale = 1.0);
CriterionResult spectral_typicality(std::uint64_t seed = kSeedSpectral,
                                    double scale = 1.0);

// Not one of the numbered criteria: pooled Upsilon weight fit against
// Geom(psi/(theta_r n)), the distributional bridge the weights suite runs.
CriterionResult weight_distribution(std::uint64_t seed = kSeedWeights,
                                    double scale = 1.0);

struct DeterminismOptions {
  std::string cli_path;     // epiwalk binary; empty = in-process comparison
  std::string scratch_dir = ".";
};
CriterionResult determinism(const DeterminismOptions& opts);

// All ten numbered criteria in order.
std::vector<CriterionResult> run_all(const DeterminismOptions& opts);

// Named validate suites exposed by the CLI. Throws on unknown name.
struct SuiteReport {
  std::string suite;
  bool pass = false;
  std::vector<CriterionResult> results;
  std::string jsonl;  // concatenated trial records
};
SuiteReport run_suite(const std::string& name, std::uint64_t seed,
                      bool seeded_explicitly, bool quick);

}  // namespace epiwalk::acceptance

#pragma once

#include <cstdint>

#include "epiwalk/epidemic.hpp"
#include "epiwalk/interaction.hpp"

namespace epiwalk::detail {

enum class EngineMode {
  trace_only,  // plain SI/SIR dynamics
  upsilon,     // SI extended until every pair edge resolves
  psi,         // two-phase SIR construction with pseudo-infections
};

struct EngineResult {
  EpidemicTrace trace;
  WeightedInteractionGraph graph;  // empty in trace_only mode
};

EngineResult run_engine(const RegularGraph& g, std::int32_t k,
                        const SimOptions& opts, std::uint64_t seed,
                        EngineMode mode);

}  // namespace epiwalk::detail

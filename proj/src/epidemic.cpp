#include "epiwalk/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "engine.hpp"
#include "epiwalk/theory.hpp"

namespace epiwalk {

using nlohmann::json;

std::int64_t default_si_max_steps(std::int32_t n, std::int32_t r,
                                  std::int32_t k, double rho) {
  const double steps = 2.0 * theory::theta(r) * n * std::log(static_cast<double>(k)) /
                       (theory::psi(rho, r) * k);
  return 10 * static_cast<std::int64_t>(std::ceil(steps));
}

std::int64_t default_resolution_max_steps(std::int32_t n) {
  return static_cast<std::int64_t>(
      std::ceil(std::pow(static_cast<double>(n), 1.5)));
}

EpidemicTrace run_epidemic(const RegularGraph& g, std::int32_t k,
                           const SimOptions& opts, std::uint64_t seed) {
  return detail::run_engine(g, k, opts, seed, detail::EngineMode::trace_only)
      .trace;
}

EpidemicTrace run_scripted(std::int32_t k,
                           const std::vector<ScheduledInteraction>& schedule,
                           std::int64_t xi,
                           const std::vector<std::int32_t>& initial_infectives) {
  if (k < 1) throw std::invalid_argument("run_scripted: k must be positive");
  if (initial_infectives.empty())
    throw std::invalid_argument("run_scripted: need at least one initial infective");
  if (xi != kXiInfinite && xi < 1)
    throw std::invalid_argument("run_scripted: xi must be positive or infinite");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& ev = schedule[i];
    if (ev.a < 0 || ev.a >= k || ev.b < 0 || ev.b >= k || ev.a == ev.b)
      throw std::invalid_argument("run_scripted: bad particle pair in schedule");
    if (ev.step < 1)
      throw std::invalid_argument("run_scripted: schedule steps start at 1");
    if (i > 0 && ev.step < schedule[i - 1].step)
      throw std::invalid_argument("run_scripted: schedule steps must be non-decreasing");
  }

  EpidemicTrace trace;
  trace.k = k;
  trace.xi = xi;
  trace.rho = 1.0;
  trace.infected_at.assign(k, kNever);
  std::int64_t initial_count = 0;
  for (std::int32_t x : initial_infectives) {
    if (x < 0 || x >= k)
      throw std::invalid_argument("run_scripted: initial infective out of range");
    if (trace.infected_at[x] == kNever) {
      trace.infected_at[x] = 0;
      ++initial_count;
    }
  }

  std::int64_t ever = initial_count, last_infection = kNever;
  for (const auto& ev : schedule) {
    const std::int64_t t = ev.step;
    std::int32_t lo = std::min(ev.a, ev.b), hi = std::max(ev.a, ev.b);
    trace.interactions.push_back({t, lo, hi});
    std::int32_t newly = -1;
    if (can_infect_at(trace.infected_at[lo], xi, t) &&
        trace.infected_at[hi] == kNever) {
      newly = hi;
    } else if (can_infect_at(trace.infected_at[hi], xi, t) &&
               trace.infected_at[lo] == kNever) {
      newly = lo;
    }
    if (newly >= 0) {
      trace.infected_at[newly] = t;
      ++ever;
      last_infection = t;
    }
  }
  trace.mk = ever;
  if (ever > initial_count && last_infection != kNever) trace.tk = last_infection;
  return trace;
}

std::string EpidemicTrace::to_json() const {
  json j;
  j["seed"] = seed;
  j["n"] = n;
  j["r"] = r;
  j["k"] = k;
  j["rho"] = rho;
  j["xi"] = xi == kXiInfinite ? json() : json(xi);
  json inf = json::array();
  for (std::int64_t t : infected_at) inf.push_back(t == kNever ? json() : json(t));
  j["infected_at"] = std::move(inf);
  json ints = json::array();
  for (const auto& e : interactions) ints.push_back({e.step, e.a, e.b});
  j["interactions"] = std::move(ints);
  j["M_k"] = mk;
  j["T_k"] = tk ? json(*tk) : json();
  j["censored"] = censored;
  return j.dump();
}

EpidemicTrace trace_from_json(const std::string& text) {
  json j = json::parse(text);
  EpidemicTrace t;
  t.seed = j.at("seed").get<std::uint64_t>();
  t.n = j.at("n").get<std::int32_t>();
  t.r = j.at("r").get<std::int32_t>();
  t.k = j.at("k").get<std::int32_t>();
  t.rho = j.at("rho").get<double>();
  t.xi = j.at("xi").is_null() ? kXiInfinite : j.at("xi").get<std::int64_t>();
  for (const auto& v : j.at("infected_at"))
    t.infected_at.push_back(v.is_null() ? kNever : v.get<std::int64_t>());
  for (const auto& v : j.at("interactions"))
    t.interactions.push_back({v.at(0).get<std::int64_t>(),
                              v.at(1).get<std::int32_t>(),
                              v.at(2).get<std::int32_t>()});
  t.mk = j.at("M_k").get<std::int64_t>();
  if (!j.at("T_k").is_null()) t.tk = j.at("T_k").get<std::int64_t>();
  t.censored = j.at("censored").get<bool>();
  return t;
}

}  // namespace epiwalk

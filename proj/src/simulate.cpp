#include "relgrowth/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "relgrowth/errors.hpp"
#include "relgrowth/rng.hpp"

namespace relgrowth::simulate {

namespace {

void check_population(std::uint64_t n0, double phi) {
  if (n0 < 1) throw ValidationError("population must hold at least one error");
  if (!(phi > 0.0)) throw ValidationError("phi must be positive");
}

void check_horizon(double horizon) {
  if (std::isnan(horizon) || horizon < 0.0) {
    throw ValidationError("horizon must be nonnegative");
  }
}

FailureLog assemble_event_log(std::vector<double> intervals, double elapsed,
                              double horizon, bool truncated) {
  if (truncated) return FailureLog::event_times(std::move(intervals), horizon);
  (void)elapsed;
  return FailureLog::event_times(std::move(intervals));
}

// Events on [lo, hi) by thinning against a constant bound.
void thin_segment(std::vector<double>& events, Rng& rng,
                  const std::function<double(double)>& lambda, double lo,
                  double hi, double bound) {
  double t = lo;
  while (true) {
    t += rng.exponential(bound);
    if (t >= hi) return;
    if (rng.uniform() * bound <= std::max(0.0, lambda(t))) {
      events.push_back(t);
    }
  }
}

double grid_bound(const std::function<double(double)>& lambda, double lo,
                  double hi, int points) {
  double peak = 0.0;
  for (int j = 0; j <= points; ++j) {
    const double t =
        lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(points);
    const double value = lambda(t);
    if (std::isnan(value) || std::isinf(value)) {
      throw UnboundedIntensity(
          "no finite intensity bound on the requested window");
    }
    peak = std::max(peak, value);
  }
  return 1.5 * peak;
}

}  // namespace

FailureLog simulate_jm(std::uint64_t n0, double phi, std::uint64_t seed,
                       double horizon) {
  check_population(n0, phi);
  check_horizon(horizon);
  Rng rng(seed);
  std::vector<double> intervals;
  double elapsed = 0.0;
  for (std::uint64_t i = 1; i <= n0; ++i) {
    const double rate = phi * static_cast<double>(n0 - i + 1);
    const double gap = rng.exponential(rate);
    if (elapsed + gap > horizon) {
      return assemble_event_log(std::move(intervals), elapsed, horizon, true);
    }
    elapsed += gap;
    intervals.push_back(gap);
  }
  return assemble_event_log(std::move(intervals), elapsed, horizon,
                            std::isfinite(horizon));
}

FailureLog simulate_sw(std::uint64_t n0, double phi, std::uint64_t seed,
                       double horizon) {
  check_population(n0, phi);
  check_horizon(horizon);
  Rng rng(seed);
  std::vector<double> intervals;
  double elapsed = 0.0;
  for (std::uint64_t i = 1; i <= n0; ++i) {
    const double coeff = phi * static_cast<double>(n0 - i + 1);
    const double gap = std::sqrt(-2.0 * std::log(rng.uniform()) / coeff);
    if (elapsed + gap > horizon) {
      return assemble_event_log(std::move(intervals), elapsed, horizon, true);
    }
    elapsed += gap;
    intervals.push_back(gap);
  }
  return assemble_event_log(std::move(intervals), elapsed, horizon,
                            std::isfinite(horizon));
}

FailureLog simulate_nhpp(nhpp::NhppModelId model, const nhpp::NhppParams& params,
                         double t_max, std::uint64_t seed) {
  nhpp::validate_params(model, params);
  if (!(t_max >= 0.0)) throw ValidationError("horizon must be nonnegative");
  if (t_max == 0.0) return FailureLog::event_times({}, 0.0);

  const std::function<double(double)> lambda = [&](double t) {
    return nhpp::intensity(model, params, t);
  };

  Rng rng(seed);
  std::vector<double> events;
  if (std::isfinite(lambda(0.0))) {
    const double bound = grid_bound(lambda, 0.0, t_max, 512);
    if (bound > 0.0) thin_segment(events, rng, lambda, 0.0, t_max, bound);
  } else {
    // Geometric segments; events before t_max * 1e-6 are sacrificed.
    double lo = t_max * 1e-6;
    while (lo < t_max) {
      const double hi = std::min(2.0 * lo, t_max);
      const double bound = grid_bound(lambda, lo, hi, 8);
      if (bound > 0.0) thin_segment(events, rng, lambda, lo, hi, bound);
      lo = hi;
    }
  }

  std::vector<double> intervals;
  intervals.reserve(events.size());
  double prev = 0.0;
  for (double t : events) {
    intervals.push_back(t - prev);
    prev = t;
  }
  return FailureLog::event_times(std::move(intervals), t_max);
}

RunProfile simulate_runs(const std::vector<double>& domain_probs,
                         const std::vector<double>& failure_rates,
                         std::uint64_t runs_per_domain, std::uint64_t seed) {
  if (domain_probs.empty() || domain_probs.size() != failure_rates.size()) {
    throw ValidationError("need one failure rate per domain");
  }
  if (runs_per_domain < 1) {
    throw ValidationError("each domain needs at least one run");
  }
  for (double rate : failure_rates) {
    if (!(rate >= 0.0 && rate <= 1.0)) {
      throw ValidationError("failure rates must lie in [0, 1]");
    }
  }
  Rng rng(seed);
  std::vector<DomainTally> domains;
  for (std::size_t i = 0; i < domain_probs.size(); ++i) {
    std::uint64_t failures = 0;
    for (std::uint64_t r = 0; r < runs_per_domain; ++r) {
      failures += rng.uniform() < failure_rates[i];
    }
    domains.push_back({domain_probs[i], runs_per_domain, failures});
  }
  return RunProfile::create(std::move(domains));
}

SeedingTally simulate_seeding(std::uint64_t true_n, std::uint64_t seeded_s,
                              std::uint64_t found_total, std::uint64_t seed) {
  if (found_total > true_n + seeded_s) {
    throw ValidationError("cannot find more errors than exist");
  }
  Rng rng(seed);
  std::uint64_t own_left = true_n;
  std::uint64_t seeded_left = seeded_s;
  for (std::uint64_t draw = 0; draw < found_total; ++draw) {
    const double p_seeded = static_cast<double>(seeded_left) /
                            static_cast<double>(own_left + seeded_left);
    if (rng.uniform() < p_seeded) {
      --seeded_left;
    } else {
      --own_left;
    }
  }
  SeedingTally tally;
  tally.seeded = seeded_s;
  tally.seeded_found = seeded_s - seeded_left;
  tally.own_found = true_n - own_left;
  tally.validate();
  return tally;
}

UpgradeHistory simulate_upgrade(
    const rundomain::UpgradeModel& m,
    const std::vector<std::pair<double, double>>& stage_ks,
    std::uint64_t runs_per_stage, std::uint64_t seed) {
  m.validate();
  if (runs_per_stage < 1) {
    throw ValidationError("each stage needs at least one run");
  }
  Rng rng(seed);
  UpgradeHistory history;
  double product = 1.0;
  for (const auto& [k1, k2] : stage_ks) {
    if (k1 < 0.0 || k2 < 0.0) {
      throw ValidationError("modification counts must be nonnegative");
    }
    const double load = m.a1 * k1 + m.a2 * k2;
    double factor = 1.0;
    if (load != 0.0) {
      if (m.p_inf <= 0.0) {
        throw DomainError("p_inf must be positive when stages modify code");
      }
      factor = 1.0 - load / m.p_inf;
    }
    if (!(factor > -1.0 && factor <= 1.0)) {
      throw DomainError(
          "a stage factor leaves (-1, 1]; reliability would leave [0, 1]");
    }
    product *= factor;
    const double p = m.p_inf - (m.p_inf - m.p0) * product;
    std::uint64_t successes = 0;
    for (std::uint64_t r = 0; r < runs_per_stage; ++r) {
      successes += rng.uniform() < p;
    }
    history.stages.push_back({k1, k2, runs_per_stage, successes});
  }
  history.validate();
  return history;
}

}  // namespace relgrowth::simulate

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "relgrowth/datasets.hpp"

namespace relgrowth::rundomain {

// Single-pass reliability over input-domain partitions.
struct NelsonEstimate {
  double reliability = 1.0;
  std::vector<double> per_domain_failure_rates;
};

// Non-monotone upgrade model. fitted_log_lik stays NaN until the model
// comes out of fit_upgrade_model.
struct UpgradeModel {
  double p0 = 0.0;
  double p_inf = 1.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double fitted_log_lik = std::numeric_limits<double>::quiet_NaN();

  void validate() const;  // 0 <= p0 <= p_inf <= 1, a1/a2 nonnegative
};

struct TimeDomainSeries {
  std::vector<double> hazard;            // lambda(t_j)
  std::vector<double> cumulative_times;  // t_j = sum of dt up to j
};

NelsonEstimate nelson_reliability(const RunProfile& profile);

// Probability that none of the runs fails; stable for very long series.
double multirun_reliability(const std::vector<double>& per_run_q);

// Q_j = sum_i p_ji * chi_i given which domains currently fail. Requires a
// profile carrying per-run occurrence rows.
std::vector<double> run_failure_prob(const RunProfile& profile,
                                     const std::vector<int>& failure_flags);

// Bridge from per-run failure probabilities to a piecewise-constant hazard.
// exp(-sum lambda_j * dt_j) reproduces multirun_reliability exactly.
TimeDomainSeries to_time_domain(const std::vector<double>& per_run_q,
                                const std::vector<double>& per_run_dt);

// Reliability after upgrade stage u (u = 0 is the original system).
double upgrade_reliability(const UpgradeModel& m, const UpgradeHistory& history,
                           std::size_t u);

UpgradeModel fit_upgrade_model(const UpgradeHistory& history,
                               std::uint64_t seed = 1);

// Number of improvement steps needed to move from p0 to target when each
// step removes an expected fraction a of the remaining shortfall.
std::uint64_t upgrades_to_target(double p0, double target, double a);

}  // namespace relgrowth::rundomain

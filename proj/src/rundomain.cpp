#include "relgrowth/rundomain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relgrowth/errors.hpp"
#include "relgrowth/optimize.hpp"

namespace relgrowth::rundomain {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ValidationError("run failure probability must lie in [0, 1]");
  }
  if (q == 1.0) throw CertainFailure("a run fails with probability 1");
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

// Product of stage factors through stage u; NaN signals a factor outside
// (-1, 1]. Stage 0 is the unmodified system and contributes factor 1.
double stage_product(const UpgradeModel& m, const UpgradeHistory& history,
                     std::size_t u) {
  double product = 1.0;
  for (std::size_t j = 1; j <= u; ++j) {
    const UpgradeStage& stage = history.stages[j - 1];
    const double load = m.a1 * stage.k1 + m.a2 * stage.k2;
    double factor = 1.0;
    if (load != 0.0) {
      if (m.p_inf <= 0.0) return std::numeric_limits<double>::quiet_NaN();
      factor = 1.0 - load / m.p_inf;
    }
    if (!(factor > -1.0 && factor <= 1.0)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    product *= factor;
  }
  return product;
}

double upgrade_log_lik(const UpgradeModel& m, const UpgradeHistory& history) {
  double sum = 0.0;
  double product = 1.0;
  for (const UpgradeStage& stage : history.stages) {
    const double load = m.a1 * stage.k1 + m.a2 * stage.k2;
    double factor = 1.0;
    if (load != 0.0) {
      if (m.p_inf <= 0.0) return kNegInf;
      factor = 1.0 - load / m.p_inf;
    }
    if (!(factor > -1.0 && factor <= 1.0)) return kNegInf;
    product *= factor;
    const double p = m.p_inf - (m.p_inf - m.p0) * product;
    if (!(p > 0.0 && p < 1.0)) return kNegInf;
    const double runs = static_cast<double>(stage.runs);
    const double wins = static_cast<double>(stage.successes);
    sum += std::lgamma(runs + 1.0) - std::lgamma(wins + 1.0) -
           std::lgamma(runs - wins + 1.0) + wins * std::log(p) +
           (runs - wins) * std::log1p(-p);
  }
  return sum;
}

UpgradeModel decode_upgrade(const std::vector<double>& theta) {
  UpgradeModel m;
  m.p_inf = logistic(theta[1]);
  m.p0 = m.p_inf * logistic(theta[0]);
  m.a1 = std::exp(theta[2]);
  m.a2 = std::exp(theta[3]);
  return m;
}

}  // namespace

void UpgradeModel::validate() const {
  if (!(p0 >= 0.0 && p0 <= p_inf && p_inf <= 1.0)) {
    throw ValidationError("upgrade model needs 0 <= p0 <= p_inf <= 1");
  }
  if (!(a1 >= 0.0) || !(a2 >= 0.0)) {
    throw ValidationError("upgrade efficiency factors must be nonnegative");
  }
}

NelsonEstimate nelson_reliability(const RunProfile& profile) {
  NelsonEstimate out;
  double weighted = 0.0;
  for (const DomainTally& d : profile.domains()) {
    const double rate =
        static_cast<double>(d.failures) / static_cast<double>(d.runs);
    out.per_domain_failure_rates.push_back(rate);
    weighted += rate * d.prob;
  }
  out.reliability = 1.0 - weighted;
  return out;
}

double multirun_reliability(const std::vector<double>& per_run_q) {
  double log_sum = 0.0;
  for (double q : per_run_q) {
    check_q(q);
    log_sum += std::log1p(-q);
  }
  return std::exp(log_sum);
}

std::vector<double> run_failure_prob(const RunProfile& profile,
                                     const std::vector<int>& failure_flags) {
  const auto& rows = profile.per_run_occurrence();
  if (rows.empty()) {
    throw ValidationError("profile carries no per-run occurrence rows");
  }
  if (failure_flags.size() != profile.domains().size()) {
    throw ValidationError("one failure flag per domain required");
  }
  for (int flag : failure_flags) {
    if (flag != 0 && flag != 1) {
      throw ValidationError("failure flags must be 0 or 1");
    }
  }
  std::vector<double> q;
  q.reserve(rows.size());
  for (const auto& row : rows) {
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      sum += row[i] * static_cast<double>(failure_flags[i]);
    }
    q.push_back(std::min(1.0, sum));
  }
  return q;
}

TimeDomainSeries to_time_domain(const std::vector<double>& per_run_q,
                                const std::vector<double>& per_run_dt) {
  if (per_run_q.size() != per_run_dt.size()) {
    throw ValidationError("Q series and duration series differ in length");
  }
  TimeDomainSeries out;
  double elapsed = 0.0;
  for (std::size_t j = 0; j < per_run_q.size(); ++j) {
    check_q(per_run_q[j]);
    if (!(per_run_dt[j] > 0.0)) {
      throw ValidationError("run durations must be positive");
    }
    out.hazard.push_back(-std::log1p(-per_run_q[j]) / per_run_dt[j]);
    elapsed += per_run_dt[j];
    out.cumulative_times.push_back(elapsed);
  }
  return out;
}

double upgrade_reliability(const UpgradeModel& m, const UpgradeHistory& history,
                           std::size_t u) {
  m.validate();
  if (u > history.stages.size()) {
    throw ValidationError("stage index exceeds recorded history");
  }
  const double product = stage_product(m, history, u);
  if (!std::isfinite(product)) {
    throw DomainError(
        "a stage factor leaves (-1, 1]; reliability would leave [0, 1]");
  }
  return m.p_inf - (m.p_inf - m.p0) * product;
}

UpgradeModel fit_upgrade_model(const UpgradeHistory& history,
                               std::uint64_t seed) {
  history.validate();
  if (history.stages.size() < 4) {
    throw InsufficientData("upgrade fit needs at least 4 stages");
  }

  double best_rate = 0.0;
  double k_sum = 0.0;
  std::size_t k_stages = 0;
  for (const UpgradeStage& stage : history.stages) {
    best_rate = std::max(best_rate, static_cast<double>(stage.successes) /
                                        static_cast<double>(stage.runs));
    if (stage.k1 + stage.k2 > 0.0) {
      k_sum += (stage.k1 + stage.k2) / 2.0;
      ++k_stages;
    }
  }
  const double first_rate = static_cast<double>(history.stages[0].successes) /
                            static_cast<double>(history.stages[0].runs);
  const double p_inf0 = std::clamp(best_rate, 0.05, 0.99);
  const double ratio0 = std::clamp(first_rate / p_inf0, 0.02, 0.98);
  const double a0 = k_stages == 0 ? 0.1 : 0.1 / (k_sum / k_stages);

  const std::vector<double> start = {logit(ratio0), logit(p_inf0),
                                     std::log(a0), std::log(a0)};
  const ObjectiveFn objective = [&](const std::vector<double>& theta) {
    return -upgrade_log_lik(decode_upgrade(theta), history);
  };
  const MultiStartResult result = multi_start_minimize(objective, start, seed);
  if (!std::isfinite(result.best.fval)) {
    throw NonConvergence("upgrade fit found no feasible parameters");
  }
  if (result.agreeing_restarts(1e-4) < 2) {
    throw NonConvergence(
        "upgrade fit restarts disagree beyond 1e-4 in log-likelihood");
  }
  UpgradeModel m = decode_upgrade(result.best.x);
  m.fitted_log_lik = -result.best.fval;
  return m;
}

std::uint64_t upgrades_to_target(double p0, double target, double a) {
  if (!(p0 >= 0.0 && p0 < 1.0)) {
    throw ValidationError("p0 must lie in [0, 1)");
  }
  if (!(target > p0 && target < 1.0)) {
    throw ValidationError("target must lie in (p0, 1)");
  }
  if (!(a > 0.0 && a < 1.0)) {
    throw ValidationError("improvement factor must lie in (0, 1)");
  }
  const double ratio = std::fabs(std::log((1.0 - p0) / (1.0 - target))) /
                       std::fabs(std::log1p(-a));
  return static_cast<std::uint64_t>(std::ceil(ratio));
}

}  // namespace relgrowth::rundomain

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <tuple>
#include <vector>

#include "relgrowth/datasets.hpp"
#include "relgrowth/nhpp.hpp"
#include "relgrowth/rng.hpp"

// Hand-rolled reference computations the library must agree with. These are
// intentionally naive: plain products instead of log-sums, explicit
// enumeration instead of closed forms.
namespace testsupport {

// Closed-form JM rate estimate at a fixed population size:
// phi_hat = n / sum_i (N - i + 1) t_i.
inline double jm_phi_closed_form(double n0, const std::vector<double>& gaps) {
  double denom = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    denom += (n0 - static_cast<double>(i)) * gaps[i];
  }
  return static_cast<double>(gaps.size()) / denom;
}

// Naive likelihood of a two-part detection trace: direct probability
// product, no logs.
inline double partition_naive_likelihood(const std::vector<int>& trace,
                                         std::uint64_t n1, std::uint64_t n2) {
  double product = 1.0;
  std::uint64_t found1 = 0;
  std::uint64_t found2 = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double pool =
        static_cast<double>(n1 + n2) - static_cast<double>(i);
    const double left = trace[i] == 0 ? static_cast<double>(n1 - found1)
                                      : static_cast<double>(n2 - found2);
    if (left <= 0.0) return 0.0;
    product *= left / pool;
    if (trace[i] == 0) {
      ++found1;
    } else {
      ++found2;
    }
  }
  return product;
}

// Exhaustive grid argmax with the library's tie rule (smaller n1+n2, then
// smaller n1) but on raw probabilities.
inline std::tuple<std::uint64_t, std::uint64_t, double> partition_naive_scan(
    const std::vector<int>& trace, std::uint64_t n_max) {
  std::uint64_t found1 = 0;
  std::uint64_t found2 = 0;
  for (int flag : trace) (flag == 0 ? found1 : found2)++;
  std::uint64_t best1 = found1;
  std::uint64_t best2 = found2;
  double best = -1.0;
  for (std::uint64_t n1 = found1; n1 <= n_max; ++n1) {
    for (std::uint64_t n2 = found2; n2 <= n_max; ++n2) {
      const double value = partition_naive_likelihood(trace, n1, n2);
      const bool better =
          value > best ||
          (value == best &&
           (n1 + n2 < best1 + best2 ||
            (n1 + n2 == best1 + best2 && n1 < best1)));
      if (better) {
        best = value;
        best1 = n1;
        best2 = n2;
      }
    }
  }
  return {best1, best2, best};
}

// Probability that u runs all succeed, by enumerating every per-run domain
// assignment (k^u of them) and summing the mass of all-pass assignments.
inline double multirun_enumeration(
    const std::vector<std::vector<double>>& per_run, // p_ji, u rows, k cols
    const std::vector<int>& failure_flags) {
  const std::size_t u = per_run.size();
  const std::size_t k = failure_flags.size();
  std::vector<std::size_t> choice(u, 0);
  double success_mass = 0.0;
  while (true) {
    double mass = 1.0;
    bool fails = false;
    for (std::size_t j = 0; j < u; ++j) {
      mass *= per_run[j][choice[j]];
      fails = fails || failure_flags[choice[j]] == 1;
    }
    if (!fails) success_mass += mass;
    std::size_t pos = 0;
    while (pos < u && ++choice[pos] == k) {
      choice[pos] = 0;
      ++pos;
    }
    if (pos == u) break;
  }
  return success_mass;
}

// Valid random parameter draws per NHPP catalog row, for property tests.
inline relgrowth::nhpp::NhppParams random_nhpp_params(
    relgrowth::nhpp::NhppModelId model, relgrowth::Rng& rng) {
  using relgrowth::nhpp::NhppModelId;
  const auto log_uniform = [&](double lo, double hi) {
    return lo * std::exp(rng.uniform() * std::log(hi / lo));
  };
  const double a = log_uniform(1.0, 200.0);
  const double g = log_uniform(0.05, 2.0);
  switch (model) {
    case NhppModelId::Duane:
      return {{"a", a}, {"g", rng.uniform(0.3, 1.5)}};
    case NhppModelId::Gompertz:
      return {{"a", a}, {"g", rng.uniform(0.05, 0.9)},
              {"c", rng.uniform(0.1, 0.9)}};
    case NhppModelId::GoelOkumoto:
    case NhppModelId::Schneidewind:
    case NhppModelId::DelayedS:
    case NhppModelId::Dahiya:
    case NhppModelId::XieLog:
      return {{"a", a}, {"g", g}};
    case NhppModelId::MusaOkumoto:
      return {{"a", log_uniform(0.1, 5.0)}, {"g", log_uniform(0.1, 5.0)}};
    case NhppModelId::Weibull:
      return {{"a", a}, {"g", g}, {"c", rng.uniform(0.6, 2.5)}};
    case NhppModelId::YamadaExponential:
    case NhppModelId::RayleighS:
      return {{"a", a}, {"g", g}, {"r", rng.uniform(0.5, 2.0)},
              {"c", rng.uniform(0.5, 2.0)}};
    case NhppModelId::InflectionS:
      return {{"a", a}, {"g", g}, {"c", rng.uniform(0.0, 5.0)}};
    case NhppModelId::ParametrizedS:
      return {{"a", a}, {"g", g}, {"psi", rng.uniform(0.0, 5.0)}};
    case NhppModelId::Pareto:
      return {{"a", a}, {"g", rng.uniform(1.2, 4.0)},
              {"c", log_uniform(0.5, 10.0)}};
    case NhppModelId::Hyperexponential:
      return {{"a", a}, {"b1", rng.uniform(0.1, 0.9)},
              {"g1", g}, {"g2", log_uniform(0.05, 2.0)}};
    case NhppModelId::Littlewood:
      return {{"a", a}, {"g", rng.uniform(0.5, 3.0)},
              {"c", log_uniform(0.5, 5.0)}};
    case NhppModelId::Parabolic:
      return {{"a", a}, {"l", rng.uniform(0.001, 0.2)},
              {"m", rng.uniform(0.0, 0.2)}, {"n", rng.uniform(0.0, 0.5)}};
    case NhppModelId::Logistic:
      return {{"a", a}, {"g", g}, {"k", log_uniform(0.1, 10.0)}};
    case NhppModelId::Pham: {
      const double d = -rng.uniform(0.0, g / 10.0);
      return {{"a", a}, {"g", g}, {"d", d}};
    }
    case NhppModelId::Zhang: {
      const double beta = rng.uniform(-1.0, 1.0);
      return {{"a", a}, {"p", beta + rng.uniform(0.2, 2.0)}, {"beta", beta},
              {"alpha", rng.uniform(0.0, 3.0)}, {"c", log_uniform(0.1, 2.0)},
              {"g", g}};
    }
  }
  return {{"a", a}, {"g", g}};
}

// Regroup an event log into `bins` equal-duration count bins over [0, T].
inline relgrowth::FailureLog bin_events(const relgrowth::FailureLog& log,
                                        std::size_t bins) {
  const double width = log.total_time() / static_cast<double>(bins);
  std::vector<relgrowth::Bin> out(bins, relgrowth::Bin{width, 0});
  for (double s : log.cumulative_times()) {
    auto index = static_cast<std::size_t>(s / width);
    if (index >= bins) index = bins - 1;
    ++out[index].count;
  }
  return relgrowth::FailureLog::grouped_counts(std::move(out));
}

}  // namespace testsupport

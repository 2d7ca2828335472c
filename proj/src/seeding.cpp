#include "relgrowth/seeding.hpp"

#include <cmath>
#include <limits>

#include "relgrowth/errors.hpp"

namespace relgrowth::seeding {

namespace {

double log_binomial(std::uint64_t n, std::uint64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

std::int64_t round_companion(double x) {
  return static_cast<std::int64_t>(std::llround(x));
}

double partition_log_lik(const std::vector<int>& trace, std::uint64_t n1,
                         std::uint64_t n2) {
  // Sequential detection: before step i (0-based), i errors are gone and the
  // remaining ones are equally likely, so the part probabilities are the
  // remaining counts over n1 + n2 - i.
  std::uint64_t found1 = 0;
  std::uint64_t found2 = 0;
  double log_lik = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double remaining_total = static_cast<double>(n1 + n2 - i);
    const std::uint64_t remaining =
        trace[i] == 0 ? n1 - found1 : n2 - found2;
    if (remaining == 0) return -std::numeric_limits<double>::infinity();
    log_lik += std::log(static_cast<double>(remaining) / remaining_total);
    (trace[i] == 0 ? found1 : found2) += 1;
  }
  return log_lik;
}

}  // namespace

PopulationEstimate mills_estimate(const SeedingTally& t) {
  t.validate();
  if (t.seeded_found == 0) {
    throw DegenerateInput(
        "no seeded errors were recovered; the ratio estimate is undefined "
        "(use mills_confidence_partial to bound the error count instead)");
  }
  PopulationEstimate est;
  est.method = EstimateMethod::Mills;
  est.n_hat = static_cast<double>(t.seeded) *
              static_cast<double>(t.own_found) /
              static_cast<double>(t.seeded_found);
  est.n_hat_rounded = round_companion(est.n_hat);
  return est;
}

double mills_confidence_full(std::uint64_t seeded, std::uint64_t own_found,
                             std::uint64_t claim) {
  if (seeded == 0) {
    throw ValidationError("confidence requires at least one seeded error");
  }
  if (own_found > claim) return 1.0;
  return static_cast<double>(seeded) /
         static_cast<double>(seeded + claim + 1);
}

double mills_confidence_partial(std::uint64_t seeded,
                                std::uint64_t seeded_found,
                                std::uint64_t own_found,
                                std::uint64_t claim) {
  if (seeded_found == 0 || seeded_found > seeded) {
    throw ValidationError("seeded_found must lie in [1, seeded]");
  }
  if (own_found > claim) return 1.0;
  const double log_ratio =
      log_binomial(seeded, seeded_found - 1) -
      log_binomial(seeded + claim + 1, claim + seeded_found);
  return std::exp(log_ratio);
}

PopulationEstimate partition_estimate(const PartitionTrace& trace,
                                      const PartitionOptions& options) {
  trace.validate();
  if (trace.found_in_part2.empty()) {
    throw ValidationError("partition trace must record at least one error");
  }
  const std::uint64_t found1 = trace.part1_count();
  const std::uint64_t found2 = trace.part2_count();
  const std::uint64_t n_max =
      options.n_max != 0 ? options.n_max : 10 * trace.found_in_part2.size();
  if (n_max < found1 || n_max < found2) {
    throw ValidationError("n_max is below the observed per-part counts");
  }

  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best1 = found1;
  std::uint64_t best2 = found2;
  for (std::uint64_t n1 = found1; n1 <= n_max; ++n1) {
    for (std::uint64_t n2 = found2; n2 <= n_max; ++n2) {
      const double log_lik = partition_log_lik(trace.found_in_part2, n1, n2);
      const bool better =
          log_lik > best ||
          (log_lik == best &&
           (n1 + n2 < best1 + best2 ||
            (n1 + n2 == best1 + best2 && n1 < best1)));
      if (better) {
        best = log_lik;
        best1 = n1;
        best2 = n2;
      }
    }
  }
  if (best == -std::numeric_limits<double>::infinity()) {
    throw ValidationError("no positive-likelihood (N1, N2) on the grid");
  }
  if (best1 == n_max || best2 == n_max) {
    throw Unbounded(
        "partition likelihood keeps rising at the grid edge N_max = " +
        std::to_string(n_max) + "; raise PartitionOptions::n_max");
  }

  PopulationEstimate est;
  est.method = EstimateMethod::Partition;
  est.n_hat = static_cast<double>(best1 + best2);
  est.n_hat_rounded = static_cast<std::int64_t>(best1 + best2);
  est.auxiliary["n1"] = static_cast<double>(best1);
  est.auxiliary["n2"] = static_cast<double>(best2);
  est.auxiliary["log_likelihood"] = best;
  return est;
}

PopulationEstimate functional_objects_estimate(const SeedingTally& t) {
  t.validate();
  if (!t.total_fo) {
    throw ValidationError(
        "functional-objects estimate needs total_fo, sampled_fo and "
        "control_pct");
  }
  const double m_total = static_cast<double>(*t.total_fo);
  const double m_sampled = static_cast<double>(*t.sampled_fo);
  const double denominator =
      (*t.control_pct / 100.0) * m_total - static_cast<double>(t.seeded_found);
  if (denominator <= 0.0) {
    throw DegenerateInput(
        "found seeded errors reach the controlled share; the estimate "
        "diverges (denominator " +
        std::to_string(denominator) + ")");
  }
  PopulationEstimate est;
  est.method = EstimateMethod::FunctionalObjects;
  est.n_hat = static_cast<double>(t.own_found) * (m_total - m_sampled + 1.0) /
              denominator;
  est.n_hat_rounded = round_companion(est.n_hat);
  return est;
}

PopulationEstimate groups_estimate(const GroupTally& t) {
  t.validate();
  if (t.common_found == 0) {
    throw DegenerateInput(
        "the groups share no findings; the capture-recapture estimate "
        "diverges");
  }
  PopulationEstimate est;
  est.method = EstimateMethod::Groups;
  est.n_hat = static_cast<double>(t.group1_found) *
              static_cast<double>(t.group2_found) /
              static_cast<double>(t.common_found);
  est.n_hat_rounded = round_companion(est.n_hat);
  est.auxiliary["e1"] = static_cast<double>(t.group1_found) / est.n_hat;
  est.auxiliary["e2"] = static_cast<double>(t.group2_found) / est.n_hat;
  return est;
}

}  // namespace relgrowth::seeding

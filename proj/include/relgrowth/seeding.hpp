#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "relgrowth/datasets.hpp"

namespace relgrowth::seeding {

enum class EstimateMethod { Mills, Partition, FunctionalObjects, Groups };

/// Estimated original error count. `n_hat` is the real-valued estimate;
/// `n_hat_rounded` is the nearest-integer companion, reported separately so
/// nothing is rounded silently. `auxiliary` carries method-specific extras
/// (group efficiencies e1/e2; partition components n1/n2 and log_likelihood).
struct PopulationEstimate {
  double n_hat = 0.0;
  std::int64_t n_hat_rounded = 0;
  EstimateMethod method = EstimateMethod::Mills;
  std::map<std::string, double> auxiliary;
};

/// Seeded-error estimate N = S*n/v from S seeded errors of which v were
/// found alongside n own errors. Throws DegenerateInput when v = 0.
PopulationEstimate mills_estimate(const SeedingTally& t);

/// Probability that the code held at most `claim` own errors when all S
/// seeded errors were recovered and n own errors surfaced: 1 if n > claim,
/// else S/(S + claim + 1).
double mills_confidence_full(std::uint64_t seeded, std::uint64_t own_found,
                             std::uint64_t claim);

/// Same confidence when only v of the S seeded errors were recovered:
/// 1 if n > claim, else C(S, v-1)/C(S+claim+1, claim+v), evaluated in
/// log-space. Reduces to mills_confidence_full at v = S.
double mills_confidence_partial(std::uint64_t seeded,
                                std::uint64_t seeded_found,
                                std::uint64_t own_found, std::uint64_t claim);

struct PartitionOptions {
  /// Upper grid edge for both component counts; 0 means 10x the trace length.
  std::uint64_t n_max = 0;
};

/// Two-part error-partition estimate: exhaustive integer grid search for the
/// (N1, N2) maximizing the sequential detection likelihood of the trace.
/// Ties resolve to the smallest N1+N2, then the smallest N1. Throws
/// Unbounded when the maximum sits on the grid edge.
PopulationEstimate partition_estimate(const PartitionTrace& trace,
                                      const PartitionOptions& options = {});

/// Functional-objects estimate N = n*(M-m+1)/((p/100)*M - s) where M total
/// objects, m sampled for seeding, p the controlled percentage, s = found
/// seeded errors, n = found own errors. Throws DegenerateInput when the
/// denominator is not positive.
PopulationEstimate functional_objects_estimate(const SeedingTally& t);

/// Two-group capture-recapture estimate N = N1*N2/N12 with the group
/// efficiencies E1 = N1/N, E2 = N2/N in `auxiliary`. Throws DegenerateInput
/// when the groups share no findings.
PopulationEstimate groups_estimate(const GroupTally& t);

}  // namespace relgrowth::seeding

#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "relgrowth/datasets.hpp"
#include "relgrowth/nhpp.hpp"
#include "relgrowth/rundomain.hpp"

namespace relgrowth::simulate {

// Exponential inter-failure intervals with rate phi * (n0 - i + 1); stops
// at the horizon or when the error population is exhausted.
FailureLog simulate_jm(std::uint64_t n0, double phi, std::uint64_t seed,
                       double horizon = std::numeric_limits<double>::infinity());

// Rayleigh inter-failure intervals, hazard phi * (n0 - i + 1) * t.
FailureLog simulate_sw(std::uint64_t n0, double phi, std::uint64_t seed,
                       double horizon = std::numeric_limits<double>::infinity());

// Thinning sampler against a grid bound (safety factor 1.5); intensities
// that blow up at t = 0 get piecewise bounds on [T*1e-6, T] and events in
// the sacrificed prefix are dropped.
FailureLog simulate_nhpp(nhpp::NhppModelId model, const nhpp::NhppParams& params,
                         double t_max, std::uint64_t seed);

// Bernoulli runs per domain: every domain receives runs_per_domain runs.
RunProfile simulate_runs(const std::vector<double>& domain_probs,
                         const std::vector<double>& failure_rates,
                         std::uint64_t runs_per_domain, std::uint64_t seed);

// Hypergeometric split of found_total detections between true_n own errors
// and seeded_s planted ones.
SeedingTally simulate_seeding(std::uint64_t true_n, std::uint64_t seeded_s,
                              std::uint64_t found_total, std::uint64_t seed);

// Binomial run outcomes per upgrade stage at the model's stage reliability;
// stage_ks lists (k1, k2) for each upgrade.
UpgradeHistory simulate_upgrade(
    const rundomain::UpgradeModel& m,
    const std::vector<std::pair<double, double>>& stage_ks,
    std::uint64_t runs_per_stage, std::uint64_t seed);

}  // namespace relgrowth::simulate

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relgrowth/datasets.hpp"

namespace relgrowth::growth {

/// Finite-failure hazard catalog. The first five rows are Markov (hazard
/// depends on the error index only); the last four are semi-Markov (hazard
/// also depends on the dwell time in the current state).
enum class HazardModelId {
  JM,
  Lipov,
  Xui,
  Shanthikumar,
  Bucchianico,
  SW,
  Hyperbolic,
  Sukert,
  ModifiedLipov
};

bool is_semi_markov(HazardModelId model);
std::string model_name(HazardModelId model);
HazardModelId growth_model_from_name(const std::string& name);

struct HazardParams {
  double n0 = 0.0;   // initial error count N, continuous while optimizing
  double phi = 0.0;  // detection-rate factor

  /// Model-specific constants: "k" (Xui, Shanthikumar); "a","b","c"
  /// (Hyperbolic).
  std::map<std::string, double> extra;

  /// Per-stage error counts N_j for Lipov, ModifiedLipov and Sukert.
  std::vector<std::uint64_t> stage_counts;

  /// Evaluate the Xui row with exponent +k(N-i+1) instead of the printed
  /// -k(N-i+1), whose value is negative for every k > 0.
  bool xui_positive_exponent = false;

  double extra_or(const std::string& key, double fallback) const;
};

/// Hazard of the i-th error (1-based). `dwell` is the time already spent
/// waiting for it and `prior_elapsed` the total time before this state;
/// both matter only for semi-Markov rows. A hazard of exactly 0 (population
/// exhausted) is returned as 0; a negative formula value throws
/// NonPositiveHazard.
double hazard(HazardModelId model, const HazardParams& params,
              std::uint64_t i, double dwell = 0.0, double prior_elapsed = 0.0);

/// Integral of the hazard over dwell in [0, t], in closed form per row.
double cumulative_hazard(HazardModelId model, const HazardParams& params,
                         std::uint64_t i, double t,
                         double prior_elapsed = 0.0);

/// Exponential density of the i-th interfailure time under the JM row.
double density_jm(const HazardParams& params, std::uint64_t i, double t);

/// Rayleigh density of the i-th interfailure time under the SW row.
double density_sw(const HazardParams& params, std::uint64_t i, double t);

/// Exact log-likelihood of an event-times log: sum over errors of
/// ln lambda_i(t_i) - Lambda_i(t_i). Returns -inf (never throws) where a
/// hazard is nonpositive, so optimizers can probe freely.
double log_likelihood(HazardModelId model, const HazardParams& params,
                      const FailureLog& log);

struct FitOptions {
  std::uint64_t seed = 1;
  /// Per-stage counts for the Lipov variants and Sukert.
  std::vector<std::uint64_t> stage_counts;
  /// Fixed constants (Hyperbolic a,b,c; Xui/Shanthikumar k when not fitted).
  std::map<std::string, double> constants;
  /// Fit the Hyperbolic a,b,c jointly instead of taking them as constants.
  bool fit_hyperbolic_constants = false;
  bool xui_positive_exponent = false;
  int restarts = 8;
  /// Half-width of the integer scan around the continuous n0 optimum.
  std::int64_t integer_scan = 5;
};

/// Best integer initial error count near the continuous optimum, with the
/// remaining parameters re-optimized at that integer.
struct IntegerScan {
  std::int64_t n0 = 0;
  HazardParams params;
  double log_lik = 0.0;
};

struct GrowthFit {
  HazardModelId model = HazardModelId::JM;
  HazardParams params;
  double log_lik = 0.0;
  bool converged = false;
  int iterations = 0;
  IntegerScan integer;
};

/// Maximum-likelihood fit over (n0, phi[, extras]) by seeded multi-restart
/// simplex on log-transformed parameters, followed by an integer scan of n0.
/// Throws InsufficientData below 3 events and NonConvergence when fewer than
/// two restarts agree with the best log-likelihood within 1e-4.
GrowthFit fit(HazardModelId model, const FailureLog& log,
              const FitOptions& options = {});

/// Errors still latent after `observed` were found: max(0, n0 - observed).
double predict_remaining(const GrowthFit& fit, std::uint64_t observed);

/// Expected wait for the i-th error: 1/lambda_i for Markov rows, numeric
/// quadrature of the survival function for semi-Markov rows. Throws
/// ExhaustedPopulation when the population is spent at i.
double mean_time_to_next(const GrowthFit& fit, std::uint64_t i);

}  // namespace relgrowth::growth

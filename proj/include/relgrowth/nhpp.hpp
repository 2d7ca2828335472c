#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relgrowth/datasets.hpp"

namespace relgrowth::nhpp {

/// One entry per catalog row.
enum class NhppModelId {
  Duane,
  Gompertz,
  GoelOkumoto,
  Schneidewind,
  Weibull,
  YamadaExponential,
  RayleighS,
  DelayedS,
  InflectionS,
  ParametrizedS,
  Dahiya,
  Pareto,
  Hyperexponential,
  Littlewood,
  Parabolic,
  Logistic,
  Pham,
  Zhang,
  XieLog,
  MusaOkumoto
};

/// Named parameter values. Every model takes `a` and `g`; the rest are
/// row-specific (`c`, `r`, `k`, `l`, `m`, `n`, `d`, `psi`, `b1`, `g1`, `g2`,
/// `alpha`, `beta`, `p`). Gompertz additionally accepts the flag key
/// `printed_exponent` (nonzero selects the variant m = a*g^(c*t), which
/// decays; the default reads the exponent as c^t, the growing curve).
using NhppParams = std::map<std::string, double>;

const std::vector<NhppModelId>& all_models();
std::string model_name(NhppModelId model);
NhppModelId model_from_name(const std::string& name);

/// Parameter names in declaration order (excludes flag keys).
const std::vector<std::string>& param_names(NhppModelId model);

/// Models fitted without an explicit starting point. The rest are
/// evaluate-only unless the caller opts in with a start.
bool default_fittable(NhppModelId model);

/// Throws DomainError when the values leave the model's domain.
void validate_params(NhppModelId model, const NhppParams& params);

/// Expected cumulative error count m(t).
double mean_value(NhppModelId model, const NhppParams& params, double t);

/// Error rate dm/dt, analytic for every row except Zhang, which uses an
/// adaptive central difference (relative target 1e-7, one-sided near 0).
double intensity(NhppModelId model, const NhppParams& params, double t);

/// Limit of m(t) as t grows, when finite: `a` for most rows, a/g for
/// Schneidewind, a(1-e^{-rc}) for the Yamada exponential and Rayleigh
/// S-shaped rows, a/(p-beta) for Zhang when p > beta. Absent for the
/// unbounded rows (Duane, Xie, Musa-Okumoto) and the printed Gompertz
/// variant.
std::optional<double> asymptote(NhppModelId model, const NhppParams& params);

/// Poisson log-likelihood. Event times: sum ln lambda(s_i) - m(T). Grouped:
/// sum over bins of c*ln(dm) - dm - ln(c!). Returns -inf (not an error) when
/// a bin with events has zero expected mass.
double log_likelihood(NhppModelId model, const NhppParams& params,
                      const FailureLog& log);

struct NhppFitOptions {
  std::uint64_t seed = 1;
  /// Required for models outside the default-fittable set.
  std::optional<NhppParams> start;
  int restarts = 8;
};

struct NhppFit {
  NhppModelId model = NhppModelId::GoelOkumoto;
  NhppParams params;
  double log_lik = 0.0;
  LogKind fitted_on = LogKind::EventTimes;
  bool converged = false;
  int iterations = 0;
  std::size_t n_free_params = 0;
  double data_horizon = 0.0;
  std::uint64_t events = 0;
};

/// Maximum-likelihood fit by seeded multi-restart simplex over transformed
/// parameters. Needs 5 events (or 3 nonempty bins). The Rayleigh S-shaped
/// row pins c = 1: r and c enter only through their product. Throws
/// InsufficientData, ValidationError (opt-in model without a start),
/// NonConvergence (fewer than two restarts within 1e-4 of the best
/// log-likelihood) and Unidentifiable (opt-in restarts scatter beyond 1e-2).
NhppFit fit(NhppModelId model, const FailureLog& log,
            const NhppFitOptions& options = {});

struct Prediction {
  double expected_new = 0.0;
  double p_no_failure = 1.0;
  std::optional<double> remaining;
};

/// Expected new errors over (at, at+horizon], the Poisson probability of
/// none, and the remaining count a - m(at) when the row has a finite
/// asymptote.
Prediction predict(NhppModelId model, const NhppParams& params,
                   double horizon, double at);
Prediction predict(const NhppFit& fit, double horizon, double at);

/// CSV `t,m_fitted,lambda_fitted,cumulative_observed` over the grid; the
/// observed column is the step count of events (or closed bins) up to t.
void write_fitted_curve(NhppModelId model, const NhppParams& params,
                        const FailureLog& log,
                        const std::vector<double>& grid, std::ostream& out);

}  // namespace relgrowth::nhpp

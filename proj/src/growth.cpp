#include "relgrowth/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quad.hpp"
#include "relgrowth/errors.hpp"
#include "relgrowth/optimize.hpp"
#include "relgrowth/rng.hpp"

namespace relgrowth::growth {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Index of the stage holding the i-th error, 1-based; stage s covers errors
// with cumulative count up to sum(stage_counts[0..s-1]).
std::size_t stage_of(const std::vector<std::uint64_t>& stage_counts,
                     std::uint64_t i) {
  std::uint64_t cumulative = 0;
  for (std::size_t s = 0; s < stage_counts.size(); ++s) {
    cumulative += stage_counts[s];
    if (i <= cumulative) return s + 1;
  }
  throw ValidationError("error index " + std::to_string(i) +
                        " exceeds the supplied stage counts");
}

std::uint64_t found_before_stage(const std::vector<std::uint64_t>& counts,
                                 std::size_t stage) {
  std::uint64_t sum = 0;
  for (std::size_t s = 0; s + 1 < stage; ++s) sum += counts[s];
  return sum;
}

std::uint64_t found_through_stage(const std::vector<std::uint64_t>& counts,
                                  std::size_t stage) {
  std::uint64_t sum = 0;
  for (std::size_t s = 0; s < stage; ++s) sum += counts[s];
  return sum;
}

void require_stage_counts(HazardModelId model, const HazardParams& params) {
  if (params.stage_counts.empty()) {
    throw ValidationError(model_name(model) + " needs per-stage counts N_j");
  }
}

// Raw formula value of the hazard row; may be negative (Xui as printed).
double hazard_value(HazardModelId model, const HazardParams& params,
                    std::uint64_t i, double dwell, double prior_elapsed) {
  const double n = params.n0;
  const double phi = params.phi;
  const double remaining = n - static_cast<double>(i - 1);
  switch (model) {
    case HazardModelId::JM:
      return phi * remaining;
    case HazardModelId::Lipov: {
      require_stage_counts(model, params);
      const std::size_t s = stage_of(params.stage_counts, i);
      return phi *
             (n - static_cast<double>(
                      found_before_stage(params.stage_counts, s)));
    }
    case HazardModelId::Xui: {
      const double k = params.extra_or("k", 0.0);
      const double exponent = params.xui_positive_exponent
                                  ? k * (n - static_cast<double>(i) + 1.0)
                                  : -k * (n - static_cast<double>(i) + 1.0);
      return phi * (std::exp(exponent) - 1.0);
    }
    case HazardModelId::Shanthikumar: {
      const double k = params.extra_or("k", 1.0);
      return phi * std::pow(remaining, k);
    }
    case HazardModelId::Bucchianico:
      return 1.0 - std::pow(phi, remaining);
    case HazardModelId::SW:
      return phi * remaining * dwell;
    case HazardModelId::Hyperbolic: {
      const double a = params.extra_or("a", 0.0);
      const double b = params.extra_or("b", 0.0);
      const double c = params.extra_or("c", 0.0);
      return phi * remaining * (-a * dwell * dwell + b * dwell + c);
    }
    case HazardModelId::Sukert: {
      require_stage_counts(model, params);
      const std::size_t s = stage_of(params.stage_counts, i);
      const double through = static_cast<double>(
          found_through_stage(params.stage_counts, s));
      return phi * (n - (static_cast<double>(i) - through)) * dwell;
    }
    case HazardModelId::ModifiedLipov: {
      require_stage_counts(model, params);
      const std::size_t s = stage_of(params.stage_counts, i);
      const double before = static_cast<double>(
          found_before_stage(params.stage_counts, s));
      return phi * (n - before) * (dwell / 2.0 + prior_elapsed);
    }
  }
  throw ValidationError("unknown hazard model");
}

double cumulative_hazard_value(HazardModelId model, const HazardParams& params,
                               std::uint64_t i, double t,
                               double prior_elapsed) {
  const double n = params.n0;
  const double phi = params.phi;
  const double remaining = n - static_cast<double>(i - 1);
  switch (model) {
    case HazardModelId::JM:
    case HazardModelId::Lipov:
    case HazardModelId::Xui:
    case HazardModelId::Shanthikumar:
    case HazardModelId::Bucchianico:
      // Markov rows are constant in dwell.
      return hazard_value(model, params, i, 0.0, prior_elapsed) * t;
    case HazardModelId::SW:
      return phi * remaining * t * t / 2.0;
    case HazardModelId::Hyperbolic: {
      const double a = params.extra_or("a", 0.0);
      const double b = params.extra_or("b", 0.0);
      const double c = params.extra_or("c", 0.0);
      return phi * remaining *
             (-a * t * t * t / 3.0 + b * t * t / 2.0 + c * t);
    }
    case HazardModelId::Sukert: {
      require_stage_counts(model, params);
      const std::size_t s = stage_of(params.stage_counts, i);
      const double through = static_cast<double>(
          found_through_stage(params.stage_counts, s));
      return phi * (n - (static_cast<double>(i) - through)) * t * t / 2.0;
    }
    case HazardModelId::ModifiedLipov: {
      require_stage_counts(model, params);
      const std::size_t s = stage_of(params.stage_counts, i);
      const double before = static_cast<double>(
          found_before_stage(params.stage_counts, s));
      return phi * (n - before) * (t * t / 4.0 + prior_elapsed * t);
    }
  }
  throw ValidationError("unknown hazard model");
}

void validate_params(HazardModelId model, const HazardParams& params) {
  if (!(params.n0 > 0.0) || !(params.phi > 0.0)) {
    throw ValidationError("hazard parameters need n0 > 0 and phi > 0");
  }
  if (model == HazardModelId::Bucchianico && params.phi >= 1.0) {
    throw ValidationError("the Bucchianico row needs phi in (0, 1)");
  }
}

// Log-likelihood with out-of-domain regions mapped to -inf instead of
// exceptions, for use inside the optimizer.
double log_likelihood_value(HazardModelId model, const HazardParams& params,
                            const std::vector<double>& intervals) {
  if (!(params.n0 > 0.0) || !(params.phi > 0.0)) return kNegInf;
  if (model == HazardModelId::Bucchianico && params.phi >= 1.0) return kNegInf;
  double log_lik = 0.0;
  double elapsed = 0.0;
  for (std::size_t idx = 0; idx < intervals.size(); ++idx) {
    const std::uint64_t i = idx + 1;
    const double t = intervals[idx];
    const double lambda = hazard_value(model, params, i, t, elapsed);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) return kNegInf;
    log_lik += std::log(lambda) -
               cumulative_hazard_value(model, params, i, t, elapsed);
    elapsed += t;
  }
  return std::isfinite(log_lik) ? log_lik : kNegInf;
}

struct FitLayout {
  // Names of the extra parameters being optimized after (n0, phi).
  std::vector<std::string> extras;
  bool phi_logit = false;  // Bucchianico: phi in (0,1)
};

FitLayout fit_layout(HazardModelId model, const FitOptions& options) {
  FitLayout layout;
  switch (model) {
    case HazardModelId::Bucchianico:
      layout.phi_logit = true;
      break;
    case HazardModelId::Xui:
    case HazardModelId::Shanthikumar:
      if (!options.constants.count("k")) layout.extras = {"k"};
      break;
    case HazardModelId::Hyperbolic:
      if (options.fit_hyperbolic_constants) layout.extras = {"a", "b", "c"};
      break;
    default:
      break;
  }
  return layout;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// theta[0] -> n0 = n_obs + exp(theta0); theta[1] -> phi; extras follow.
HazardParams decode(HazardModelId, const FitLayout& layout,
                    const FitOptions& options, std::uint64_t n_obs,
                    const std::vector<double>& theta) {
  HazardParams p;
  p.n0 = static_cast<double>(n_obs) + std::exp(theta[0]);
  p.phi = layout.phi_logit ? logistic(theta[1]) : std::exp(theta[1]);
  p.extra = options.constants;
  for (std::size_t j = 0; j < layout.extras.size(); ++j) {
    // Extras are kept on their natural scale; the likelihood barrier handles
    // invalid regions (the Xui k may legitimately be negative).
    p.extra[layout.extras[j]] = theta[2 + j];
  }
  p.stage_counts = options.stage_counts;
  p.xui_positive_exponent = options.xui_positive_exponent;
  return p;
}

double extra_start(HazardModelId model, const std::string& name) {
  if (model == HazardModelId::Xui && name == "k") return -0.1;
  if (model == HazardModelId::Shanthikumar && name == "k") return 1.0;
  return 1.0;
}

}  // namespace

bool is_semi_markov(HazardModelId model) {
  switch (model) {
    case HazardModelId::SW:
    case HazardModelId::Hyperbolic:
    case HazardModelId::Sukert:
    case HazardModelId::ModifiedLipov:
      return true;
    default:
      return false;
  }
}

std::string model_name(HazardModelId model) {
  switch (model) {
    case HazardModelId::JM: return "jm";
    case HazardModelId::Lipov: return "lipov";
    case HazardModelId::Xui: return "xui";
    case HazardModelId::Shanthikumar: return "shanthikumar";
    case HazardModelId::Bucchianico: return "bucchianico";
    case HazardModelId::SW: return "sw";
    case HazardModelId::Hyperbolic: return "hyperbolic";
    case HazardModelId::Sukert: return "sukert";
    case HazardModelId::ModifiedLipov: return "modified-lipov";
  }
  return "unknown";
}

HazardModelId growth_model_from_name(const std::string& name) {
  for (HazardModelId id :
       {HazardModelId::JM, HazardModelId::Lipov, HazardModelId::Xui,
        HazardModelId::Shanthikumar, HazardModelId::Bucchianico,
        HazardModelId::SW, HazardModelId::Hyperbolic, HazardModelId::Sukert,
        HazardModelId::ModifiedLipov}) {
    if (model_name(id) == name) return id;
  }
  throw ValidationError("unknown growth model '" + name + "'");
}

double HazardParams::extra_or(const std::string& key, double fallback) const {
  const auto it = extra.find(key);
  return it == extra.end() ? fallback : it->second;
}

double hazard(HazardModelId model, const HazardParams& params, std::uint64_t i,
              double dwell, double prior_elapsed) {
  if (i == 0) throw ValidationError("error index is 1-based");
  validate_params(model, params);
  if (is_semi_markov(model) && !(dwell >= 0.0)) {
    throw ValidationError("dwell time must be nonnegative");
  }
  const double lambda = hazard_value(model, params, i, dwell, prior_elapsed);
  if (lambda < 0.0) {
    throw NonPositiveHazard(model_name(model) + " hazard is negative (" +
                            std::to_string(lambda) +
                            ") for this parameterization");
  }
  return lambda;
}

double cumulative_hazard(HazardModelId model, const HazardParams& params,
                         std::uint64_t i, double t, double prior_elapsed) {
  if (i == 0) throw ValidationError("error index is 1-based");
  validate_params(model, params);
  if (!(t >= 0.0)) throw ValidationError("dwell time must be nonnegative");
  return cumulative_hazard_value(model, params, i, t, prior_elapsed);
}

double density_jm(const HazardParams& params, std::uint64_t i, double t) {
  const double lambda = hazard(HazardModelId::JM, params, i);
  return lambda * std::exp(-lambda * t);
}

double density_sw(const HazardParams& params, std::uint64_t i, double t) {
  validate_params(HazardModelId::SW, params);
  const double rate = params.phi * (params.n0 - static_cast<double>(i - 1));
  if (rate < 0.0) {
    throw NonPositiveHazard("sw rate is negative for this parameterization");
  }
  return rate * t * std::exp(-rate * t * t / 2.0);
}

double log_likelihood(HazardModelId model, const HazardParams& params,
                      const FailureLog& log) {
  validate_params(model, params);
  return log_likelihood_value(model, params, log.intervals());
}

GrowthFit fit(HazardModelId model, const FailureLog& log,
              const FitOptions& options) {
  const auto& intervals = log.intervals();
  const std::uint64_t n_obs = intervals.size();
  if (n_obs < 3) {
    throw InsufficientData("growth fit needs at least 3 recorded errors");
  }
  if ((model == HazardModelId::Lipov || model == HazardModelId::Sukert ||
       model == HazardModelId::ModifiedLipov) &&
      options.stage_counts.empty()) {
    throw ValidationError(model_name(model) +
                          " fit needs FitOptions::stage_counts");
  }
  if (model == HazardModelId::Hyperbolic &&
      !options.fit_hyperbolic_constants &&
      (!options.constants.count("a") || !options.constants.count("b") ||
       !options.constants.count("c"))) {
    throw ValidationError(
        "hyperbolic fit needs constants a, b, c (or fit_hyperbolic_constants)");
  }

  const FitLayout layout = fit_layout(model, options);
  const ObjectiveFn objective = [&](const std::vector<double>& theta) {
    return -log_likelihood_value(
        model, decode(model, layout, options, n_obs, theta), intervals);
  };

  // Start n0 at 1.5x the observed count, then pin the best phi scale with a
  // coarse 1-D scan; a bad phi start is the main cause of stray restarts.
  std::vector<double> start(2 + layout.extras.size(), 0.0);
  start[0] = std::log(std::max(0.5 * static_cast<double>(n_obs), 0.5));
  for (std::size_t j = 0; j < layout.extras.size(); ++j) {
    start[2 + j] = extra_start(model, layout.extras[j]);
  }
  double best_scan = std::numeric_limits<double>::infinity();
  double best_theta1 = layout.phi_logit ? 0.0 : -1.0;
  for (double theta1 = -30.0; theta1 <= 5.0; theta1 += 0.5) {
    start[1] = theta1;
    const double value = objective(start);
    if (value < best_scan) {
      best_scan = value;
      best_theta1 = theta1;
    }
  }
  start[1] = best_theta1;

  MultiStartOptions ms;
  ms.restarts = options.restarts;
  const MultiStartResult result =
      multi_start_minimize(objective, start, options.seed, ms);
  if (!std::isfinite(result.best.fval)) {
    throw NonConvergence(model_name(model) +
                         " fit found no finite-likelihood region");
  }
  if (result.agreeing_restarts(1e-4) < 2) {
    throw NonConvergence(
        model_name(model) +
        " restarts disagree beyond 1e-4 in log-likelihood; best " +
        std::to_string(-result.best.fval));
  }

  GrowthFit fit_result;
  fit_result.model = model;
  fit_result.params = decode(model, layout, options, n_obs, result.best.x);
  fit_result.log_lik = -result.best.fval;
  fit_result.converged = result.best.converged;
  fit_result.iterations = result.total_iterations;

  // Integer companion for n0: re-optimize the remaining parameters at each
  // integer candidate around the continuous optimum.
  const std::int64_t center =
      static_cast<std::int64_t>(std::llround(fit_result.params.n0));
  IntegerScan scan;
  scan.log_lik = kNegInf;
  for (std::int64_t delta = -options.integer_scan;
       delta <= options.integer_scan; ++delta) {
    const std::int64_t candidate = center + delta;
    if (candidate < static_cast<std::int64_t>(n_obs)) continue;
    const ObjectiveFn pinned = [&](const std::vector<double>& theta_rest) {
      std::vector<double> theta(result.best.x);
      for (std::size_t j = 1; j < theta.size(); ++j) {
        theta[j] = theta_rest[j - 1];
      }
      HazardParams p = decode(model, layout, options, n_obs, theta);
      p.n0 = static_cast<double>(candidate);
      return -log_likelihood_value(model, p, intervals);
    };
    std::vector<double> rest(result.best.x.begin() + 1, result.best.x.end());
    const SimplexResult polished = nelder_mead(pinned, rest);
    if (-polished.fval > scan.log_lik) {
      std::vector<double> theta(result.best.x);
      for (std::size_t j = 1; j < theta.size(); ++j) {
        theta[j] = polished.x[j - 1];
      }
      scan.params = decode(model, layout, options, n_obs, theta);
      scan.params.n0 = static_cast<double>(candidate);
      scan.n0 = candidate;
      scan.log_lik = -polished.fval;
    }
  }
  fit_result.integer = scan;
  return fit_result;
}

double predict_remaining(const GrowthFit& fit, std::uint64_t observed) {
  return std::max(0.0, fit.params.n0 - static_cast<double>(observed));
}

double mean_time_to_next(const GrowthFit& fit, std::uint64_t i) {
  if (i == 0) throw ValidationError("error index is 1-based");
  if (static_cast<double>(i) > fit.params.n0) {
    throw ExhaustedPopulation("error index " + std::to_string(i) +
                              " exceeds the fitted population " +
                              std::to_string(fit.params.n0));
  }
  if (!is_semi_markov(fit.model)) {
    const double lambda = hazard(fit.model, fit.params, i);
    if (lambda <= 0.0) {
      throw ExhaustedPopulation("hazard vanishes at error index " +
                                std::to_string(i));
    }
    return 1.0 / lambda;
  }
  // Mean of a nonnegative variate as the integral of its survival function
  // exp(-Lambda_i(t)); the upper limit doubles until the tail is below
  // exp(-40).
  const auto cumulative = [&](double t) {
    return cumulative_hazard(fit.model, fit.params, i, t);
  };
  double upper = 1.0;
  int doublings = 0;
  while (cumulative(upper) < 40.0) {
    upper *= 2.0;
    if (++doublings > 200) {
      throw ExhaustedPopulation(
          "survival function does not decay at error index " +
          std::to_string(i));
    }
  }
  return detail::integrate(
      [&](double t) { return std::exp(-cumulative(t)); }, 0.0, upper, 1e-10);
}

}  // namespace relgrowth::growth

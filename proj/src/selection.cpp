#include "relgrowth/selection.hpp"

#include <algorithm>
#include <cmath>

#include "relgrowth/errors.hpp"
#include "relgrowth/rng.hpp"

namespace relgrowth::selection {

namespace {

// Smallest prefix a fit accepts: 5 events, or 3 nonempty bins.
std::size_t min_feasible_prefix(const FailureLog& log) {
  if (log.kind() == LogKind::EventTimes) return 5;
  std::size_t nonempty = 0;
  std::size_t i = 0;
  for (const Bin& bin : log.bins()) {
    ++i;
    if (bin.count > 0 && ++nonempty == 3) return i;
  }
  return log.bins().size() + 1;  // never feasible
}

double observed_cumulative(const FailureLog& log, std::size_t through) {
  if (log.kind() == LogKind::EventTimes) return static_cast<double>(through);
  double sum = 0.0;
  for (std::size_t i = 0; i < through; ++i) {
    sum += static_cast<double>(log.bins()[i].count);
  }
  return sum;
}

}  // namespace

InformationCriteria information_criteria(double log_lik, std::size_t n_params,
                                         std::size_t n_obs) {
  if (n_obs < 1) throw ValidationError("information criteria need n_obs >= 1");
  const double k = static_cast<double>(n_params);
  return {2.0 * k - 2.0 * log_lik,
          k * std::log(static_cast<double>(n_obs)) - 2.0 * log_lik};
}

PrequentialResult one_step_prediction_error(nhpp::NhppModelId model,
                                            const FailureLog& log,
                                            std::uint64_t seed,
                                            double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction < 1.0)) {
    throw ValidationError("window fraction must lie in (0, 1)");
  }
  const std::size_t n = log.kind() == LogKind::EventTimes
                            ? log.intervals().size()
                            : log.bins().size();
  if (log.kind() == LogKind::EventTimes && n < 6) {
    throw InsufficientData("prequential protocol needs at least 6 events");
  }
  const std::size_t half = static_cast<std::size_t>(
      std::ceil(window_fraction * static_cast<double>(n)));
  const std::size_t first = std::max(half, min_feasible_prefix(log));
  if (n < 1 || first > n - 1) {
    throw InsufficientData("no feasible prequential window");
  }

  // times[i] is when observation i+1 lands: the next event time, or the
  // closing edge of the next bin.
  std::vector<double> times;
  if (log.kind() == LogKind::EventTimes) {
    times = log.cumulative_times();
  } else {
    const std::vector<double> edges = log.bin_edges();
    times.assign(edges.begin() + 1, edges.end());
  }

  PrequentialResult out;
  for (std::size_t i = first; i <= n - 1; ++i) {
    nhpp::NhppFitOptions options;
    options.seed = derive_seed(seed, i);
    try {
      const nhpp::NhppFit fit = nhpp::fit(model, log.prefix(i), options);
      const double predicted =
          nhpp::mean_value(fit.model, fit.params, times[i]);
      const double actual = observed_cumulative(log, i + 1);
      out.sse += (predicted - actual) * (predicted - actual);
      ++out.windows;
    } catch (const NonConvergence&) {
      out.skipped.push_back(i);
    } catch (const InsufficientData&) {
      out.skipped.push_back(i);
    }
  }
  if (out.windows == 0) {
    throw InsufficientData("every prequential window failed to fit");
  }
  return out;
}

double integrated_criterion(const std::vector<double>& weights,
                            const std::vector<bool>& flags) {
  if (weights.size() != flags.size()) {
    throw ValidationError("weights and flags differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) {
      throw ValidationError("criterion weights must be nonnegative");
    }
    if (flags[i]) sum += weights[i];
  }
  return sum;
}

std::string criterion_name(Criterion by) {
  switch (by) {
    case Criterion::Aic: return "aic";
    case Criterion::Bic: return "bic";
    case Criterion::OneStepSse: return "one_step_sse";
    case Criterion::Ic: return "ic";
  }
  throw ValidationError("unknown criterion");
}

Criterion criterion_from_name(const std::string& name) {
  for (Criterion by : {Criterion::Aic, Criterion::Bic, Criterion::OneStepSse,
                       Criterion::Ic}) {
    if (criterion_name(by) == name) return by;
  }
  throw ValidationError("unknown criterion '" + name + "'");
}

std::vector<ModelScore> rank_models(const std::vector<ModelScore>& scores,
                                    Criterion by) {
  if (scores.empty()) throw ValidationError("nothing to rank");
  if (by == Criterion::Ic) {
    for (const ModelScore& s : scores) {
      if (!s.ic) {
        throw ValidationError("ranking by ic needs an ic on every candidate");
      }
    }
  }
  const auto key = [by](const ModelScore& s) {
    switch (by) {
      case Criterion::Aic: return s.aic;
      case Criterion::Bic: return s.bic;
      case Criterion::OneStepSse: return s.one_step_sse;
      case Criterion::Ic: return -*s.ic;  // descending
    }
    return s.aic;
  };
  std::vector<ModelScore> out = scores;
  std::sort(out.begin(), out.end(),
            [&](const ModelScore& lhs, const ModelScore& rhs) {
              const double a = key(lhs);
              const double b = key(rhs);
              if (a != b) return a < b;
              if (lhs.n_params != rhs.n_params) {
                return lhs.n_params < rhs.n_params;
              }
              return lhs.model < rhs.model;
            });
  return out;
}

ModelScore score_fit(const nhpp::NhppFit& fit, double one_step_sse,
                     std::optional<double> ic) {
  ModelScore score;
  score.model = nhpp::model_name(fit.model);
  score.log_lik = fit.log_lik;
  score.n_params = fit.n_free_params;
  score.n_obs = fit.events;
  const InformationCriteria criteria =
      information_criteria(fit.log_lik, fit.n_free_params, fit.events);
  score.aic = criteria.aic;
  score.bic = criteria.bic;
  score.one_step_sse = one_step_sse;
  score.ic = ic;
  return score;
}

}  // namespace relgrowth::selection

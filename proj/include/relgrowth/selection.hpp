#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relgrowth/datasets.hpp"
#include "relgrowth/nhpp.hpp"

namespace relgrowth::selection {

struct ModelScore {
  std::string model;
  double log_lik = 0.0;
  std::size_t n_params = 1;
  std::size_t n_obs = 1;
  double aic = 0.0;
  double bic = 0.0;
  double one_step_sse = 0.0;
  std::optional<double> ic;
};

struct InformationCriteria {
  double aic;
  double bic;
};

InformationCriteria information_criteria(double log_lik, std::size_t n_params,
                                         std::size_t n_obs);

struct PrequentialResult {
  double sse = 0.0;
  std::size_t windows = 0;           // windows that contributed to sse
  std::vector<std::size_t> skipped;  // prefix lengths whose refit failed
};

// Prequential one-step-ahead squared error: refit on each growing prefix
// from window_fraction of the data onward, compare the fitted mean at the
// next observation against the observed cumulative count.
PrequentialResult one_step_prediction_error(nhpp::NhppModelId model,
                                            const FailureLog& log,
                                            std::uint64_t seed = 1,
                                            double window_fraction = 0.5);

// Weighted property score for one candidate: sum of weight_i over the
// properties the candidate satisfies.
double integrated_criterion(const std::vector<double>& weights,
                            const std::vector<bool>& flags);

enum class Criterion { Aic, Bic, OneStepSse, Ic };

std::string criterion_name(Criterion by);
Criterion criterion_from_name(const std::string& name);

// Ascending for aic/bic/one_step_sse, descending for ic; ties fall back to
// fewer parameters, then lexicographic model id.
std::vector<ModelScore> rank_models(const std::vector<ModelScore>& scores,
                                    Criterion by);

// Convenience assembly of a ModelScore from an NHPP fit.
ModelScore score_fit(const nhpp::NhppFit& fit, double one_step_sse,
                     std::optional<double> ic = std::nullopt);

}  // namespace relgrowth::selection

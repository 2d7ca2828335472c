// Acceptance checks for the toolkit: closed-form fidelity, internal
// consistency of the model catalogs, estimator recovery on synthetic data,
// agreement with brute-force references, simulator statistics, selection
// behavior and command-line determinism. Prints one line per criterion and
// exits nonzero if any of them fail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "relgrowth/complexity.hpp"
#include "relgrowth/datasets.hpp"
#include "relgrowth/errors.hpp"
#include "relgrowth/growth.hpp"
#include "relgrowth/nhpp.hpp"
#include "relgrowth/rng.hpp"
#include "relgrowth/rundomain.hpp"
#include "relgrowth/seeding.hpp"
#include "relgrowth/selection.hpp"
#include "relgrowth/simulate.hpp"
#include "support/capture.hpp"
#include "support/oracles.hpp"
#include "support/quadrature.hpp"

using namespace relgrowth;

namespace {

bool close_to(double actual, double expected, double tol) {
  return std::fabs(actual - expected) <=
         tol * std::max(1.0, std::fabs(expected));
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Hand-checked values across every module, 1e-9 relative.
bool formula_fidelity(std::string& why) {
  const double tol = 1e-9;
  const auto expect = [&](const char* label, double actual, double expected) {
    if (close_to(actual, expected, tol)) return true;
    why += std::string(why.empty() ? "" : "; ") + label;
    return false;
  };
  bool ok = true;

  SeedingTally mills;
  mills.seeded = 10;
  mills.seeded_found = 5;
  mills.own_found = 20;
  ok &= expect("mills", seeding::mills_estimate(mills).n_hat, 40.0);
  ok &= expect("confidence-full", seeding::mills_confidence_full(9, 0, 0), 0.9);
  ok &= expect("confidence-partial",
               seeding::mills_confidence_partial(4, 2, 1, 1), 0.2);

  SeedingTally fo;
  fo.seeded = 10;
  fo.seeded_found = 5;
  fo.own_found = 1;
  fo.total_fo = 100;
  fo.sampled_fo = 1;
  fo.control_pct = 10.0;
  ok &= expect("functional-objects",
               seeding::functional_objects_estimate(fo).n_hat, 20.0);

  GroupTally groups;
  groups.group1_found = 10;
  groups.group2_found = 25;
  groups.common_found = 5;
  ok &= expect("groups", seeding::groups_estimate(groups).n_hat, 50.0);

  const auto halstead =
      complexity::halstead_report(complexity::HalsteadCounts{16, 16, 50, 50});
  ok &= expect("halstead-volume", halstead.volume, 500.0);
  ok &= expect("halstead-effort", halstead.effort, 12500.0);
  ok &= expect("halstead-defects", halstead.predicted_defects, 500.0 / 3000.0);

  ok &= expect("trw",
               complexity::trw_complexity(
                   complexity::TrwFactors{10.0, 5.0, 5.0, 5.0, 10.0}),
               12.5);

  ok &= expect("goel-okumoto-mean",
               nhpp::mean_value(nhpp::NhppModelId::GoelOkumoto,
                                {{"a", 100.0}, {"g", 0.1}}, 10.0),
               100.0 * (1.0 - std::exp(-1.0)));
  ok &= expect("delayed-s-intensity",
               nhpp::intensity(nhpp::NhppModelId::DelayedS,
                               {{"a", 100.0}, {"g", 0.1}}, 10.0),
               10.0 * std::exp(-1.0));
  ok &= expect("musa-okumoto-mean",
               nhpp::mean_value(nhpp::NhppModelId::MusaOkumoto,
                                {{"a", 2.0}, {"g", 0.3}}, 10.0),
               std::log(7.0) / 2.0);

  const auto profile = RunProfile::create({DomainTally{1.0, 10, 1}});
  ok &= expect("nelson", rundomain::nelson_reliability(profile).reliability,
               0.9);
  ok &= expect("upgrades-to-target",
               static_cast<double>(rundomain::upgrades_to_target(0.5, 0.95, 0.5)),
               4.0);

  ok &= expect("aic", selection::information_criteria(-100.0, 2, 100).aic,
               204.0);
  return ok;
}

// The interfailure densities of the exponential and Rayleigh hazard rows
// integrate to 1 for random parameters.
bool density_normalization(std::string& why) {
  Rng rng(20260814);
  for (int rep = 0; rep < 20; ++rep) {
    growth::HazardParams p;
    p.n0 = static_cast<double>(3 + rng.below(40));
    p.phi = rng.uniform(0.02, 0.5);
    const auto i = 1 + rng.below(static_cast<std::uint64_t>(p.n0));
    const double rate = p.phi * (p.n0 - static_cast<double>(i) + 1.0);

    const double jm = testsupport::integrate(
        [&](double t) { return growth::density_jm(p, i, t); }, 0.0,
        40.0 / rate, 1e-9);
    if (std::fabs(jm - 1.0) > 1e-6) {
      why = "exponential density mass " + std::to_string(jm);
      return false;
    }

    const double sw = testsupport::integrate(
        [&](double t) { return growth::density_sw(p, i, t); }, 0.0,
        std::sqrt(80.0 / rate), 1e-9);
    if (std::fabs(sw - 1.0) > 1e-6) {
      why = "rayleigh density mass " + std::to_string(sw);
      return false;
    }
  }
  return true;
}

// Every catalog intensity matches the central difference of its mean value.
bool intensity_derivative(std::string& why) {
  Rng rng(77);
  for (const auto model : nhpp::all_models()) {
    for (int draw = 0; draw < 10; ++draw) {
      const auto params = testsupport::random_nhpp_params(model, rng);
      double horizon = 20.0;
      if (model == nhpp::NhppModelId::Pham) horizon = 10.0 / params.at("g");
      for (const double frac : {0.15, 0.45, 0.85}) {
        const double t = frac * horizon;
        const double h = std::max(t, 1.0) * 3e-5;
        const double numeric = (nhpp::mean_value(model, params, t + h) -
                                nhpp::mean_value(model, params, t - h)) /
                               (2.0 * h);
        const double analytic = nhpp::intensity(model, params, t);
        if (std::fabs(analytic - numeric) >
            1e-5 * std::max({1.0, std::fabs(analytic), std::fabs(numeric)})) {
          why = nhpp::model_name(model) + " at t=" + std::to_string(t) +
                ": intensity " + std::to_string(analytic) +
                " vs slope " + std::to_string(numeric);
          return false;
        }
      }
    }
  }
  return true;
}

// Fitting recovers the generating parameters from simulated records.
bool estimator_recovery(std::string& why) {
  std::vector<double> jm_n0;
  for (int rep = 0; rep < 50; ++rep) {
    try {
      const auto log = simulate::simulate_jm(100, 0.01, derive_seed(4001, rep));
      growth::FitOptions options;
      options.seed = derive_seed(4002, rep);
      const auto fit = growth::fit(growth::HazardModelId::JM, log.prefix(70),
                                   options);
      jm_n0.push_back(static_cast<double>(fit.integer.n0));
    } catch (const Error&) {
    }
  }
  if (jm_n0.size() < 25) {
    why = "only " + std::to_string(jm_n0.size()) + " jm fits succeeded";
    return false;
  }
  const double jm_median = median(jm_n0);
  if (jm_median < 85.0 || jm_median > 115.0) {
    why = "median jm n0 " + std::to_string(jm_median);
    return false;
  }

  std::vector<double> go_a;
  const double horizon = std::log(5.0) / 0.05;  // 80 expected events
  for (int rep = 0; rep < 50; ++rep) {
    try {
      const auto log =
          simulate::simulate_nhpp(nhpp::NhppModelId::GoelOkumoto,
                                  {{"a", 100.0}, {"g", 0.05}}, horizon,
                                  derive_seed(4101, rep));
      nhpp::NhppFitOptions options;
      options.seed = derive_seed(4102, rep);
      const auto fit =
          nhpp::fit(nhpp::NhppModelId::GoelOkumoto, log, options);
      go_a.push_back(fit.params.at("a"));
    } catch (const Error&) {
    }
  }
  if (go_a.size() < 25) {
    why = "only " + std::to_string(go_a.size()) + " go fits succeeded";
    return false;
  }
  const double go_median = median(go_a);
  if (go_median < 80.0 || go_median > 120.0) {
    why = "median go asymptote " + std::to_string(go_median);
    return false;
  }

  rundomain::UpgradeModel truth;
  truth.p0 = 0.6;
  truth.p_inf = 0.99;
  truth.a1 = 0.3;
  truth.a2 = 0.1;
  const std::vector<std::pair<double, double>> ks(10, {1.0, 1.0});
  std::vector<double> p_inf;
  for (int rep = 0; rep < 20; ++rep) {
    try {
      const auto history =
          simulate::simulate_upgrade(truth, ks, 1000, derive_seed(4201, rep));
      p_inf.push_back(
          rundomain::fit_upgrade_model(history, derive_seed(4202, rep)).p_inf);
    } catch (const Error&) {
    }
  }
  if (p_inf.size() < 10) {
    why = "only " + std::to_string(p_inf.size()) + " upgrade fits succeeded";
    return false;
  }
  const double p_median = median(p_inf);
  if (std::fabs(p_median - 0.99) > 0.05) {
    why = "median upgrade ceiling " + std::to_string(p_median);
    return false;
  }
  return true;
}

// The fast implementations agree with exhaustive enumeration.
bool dual_route_agreement(std::string& why) {
  const std::vector<std::vector<std::vector<double>>> matrices = {
      {{0.2, 0.3, 0.5}},
      {{0.6, 0.3, 0.1}, {0.1, 0.1, 0.8}},
      {{0.2, 0.3, 0.5}, {1.0, 0.0, 0.0}, {0.25, 0.25, 0.5}},
  };
  for (const auto& per_run : matrices) {
    std::vector<DomainTally> domains(3);
    domains[0].prob = 0.2;
    domains[1].prob = 0.3;
    domains[2].prob = 0.5;
    for (auto& domain : domains) domain.runs = 1;
    const auto profile = RunProfile::create(domains, per_run);
    for (int mask = 0; mask < 8; ++mask) {
      const std::vector<int> flags = {mask & 1, (mask >> 1) & 1,
                                      (mask >> 2) & 1};
      const auto q = rundomain::run_failure_prob(profile, flags);
      double fast = 0.0;
      try {
        fast = rundomain::multirun_reliability(q);
      } catch (const CertainFailure&) {
        // a run fails with probability 1; enumeration must agree on 0
      }
      const double slow = testsupport::multirun_enumeration(per_run, flags);
      if (std::fabs(fast - slow) > 1e-12) {
        why = "multirun mismatch " + std::to_string(fast) + " vs " +
              std::to_string(slow);
        return false;
      }
    }
  }

  const std::vector<std::vector<int>> traces = {
      {0, 1, 0, 0, 1}, {0, 0, 1}, {1, 0, 1, 0, 1, 0, 1}};
  for (const auto& trace : traces) {
    PartitionTrace input;
    input.found_in_part2 = trace;
    seeding::PartitionOptions options;
    options.n_max = 30;
    const auto estimate = seeding::partition_estimate(input, options);
    const auto [n1, n2, best] = testsupport::partition_naive_scan(trace, 30);
    if (estimate.auxiliary.at("n1") != static_cast<double>(n1) ||
        estimate.auxiliary.at("n2") != static_cast<double>(n2)) {
      why = "partition argmax mismatch";
      return false;
    }
    if (!close_to(estimate.auxiliary.at("log_likelihood"), std::log(best),
                  1e-9)) {
      why = "partition likelihood mismatch";
      return false;
    }
  }
  return true;
}

// Simulator output reproduces the target distributions.
bool simulation_statistics(std::string& why) {
  const nhpp::NhppParams params = {{"a", 100.0}, {"g", 0.05}};
  const double target = nhpp::mean_value(nhpp::NhppModelId::GoelOkumoto,
                                         params, 10.0);
  const int reps = 10000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const auto log =
        simulate::simulate_nhpp(nhpp::NhppModelId::GoelOkumoto, params, 10.0,
                                derive_seed(6001, rep));
    const auto n = static_cast<double>(log.error_count());
    sum += n;
    sum_sq += n * n;
  }
  const double mean = sum / reps;
  const double variance = sum_sq / reps - mean * mean;
  if (std::fabs(mean - target) > 0.05 * target) {
    why = "poisson mean " + std::to_string(mean) + " vs " +
          std::to_string(target);
    return false;
  }
  if (std::fabs(variance - target) > 0.05 * target) {
    why = "poisson variance " + std::to_string(variance) + " vs " +
          std::to_string(target);
    return false;
  }

  // Hypergeometric split: 75 draws from 100 own + 50 seeded errors.
  const double expected_seeded = 75.0 * 50.0 / 150.0;
  const double sd = std::sqrt(75.0 * (50.0 / 150.0) * (100.0 / 150.0) *
                              (75.0 / 149.0));
  double seeded_sum = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    seeded_sum += static_cast<double>(
        simulate::simulate_seeding(100, 50, 75, derive_seed(6101, rep))
            .seeded_found);
  }
  const double seeded_mean = seeded_sum / reps;
  if (std::fabs(seeded_mean - expected_seeded) >
      3.0 * sd / std::sqrt(static_cast<double>(reps))) {
    why = "hypergeometric mean " + std::to_string(seeded_mean);
    return false;
  }
  return true;
}

// Information criteria prefer the generating model, and rankings are a
// stable total order.
bool selection_behavior(std::string& why) {
  const std::vector<nhpp::NhppModelId> rivals = {
      nhpp::NhppModelId::GoelOkumoto, nhpp::NhppModelId::DelayedS,
      nhpp::NhppModelId::Logistic, nhpp::NhppModelId::MusaOkumoto};
  int scored = 0;
  int wins = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const auto log =
        simulate::simulate_nhpp(nhpp::NhppModelId::GoelOkumoto,
                                {{"a", 60.0}, {"g", 0.15}}, 20.0,
                                derive_seed(7001, rep));
    if (log.error_count() < 20) continue;
    std::vector<selection::ModelScore> scores;
    for (const auto model : rivals) {
      try {
        nhpp::NhppFitOptions options;
        options.seed = derive_seed(7002, rep);
        scores.push_back(selection::score_fit(nhpp::fit(model, log, options),
                                              0.0));
      } catch (const Error&) {
      }
    }
    const bool has_truth =
        std::any_of(scores.begin(), scores.end(), [](const auto& s) {
          return s.model == "goel-okumoto";
        });
    if (!has_truth || scores.size() < 2) continue;
    ++scored;
    const auto ranked = selection::rank_models(scores, selection::Criterion::Aic);
    if (ranked.front().model == "goel-okumoto") ++wins;
  }
  if (scored < 30) {
    why = "only " + std::to_string(scored) + " replicates scored";
    return false;
  }
  if (2 * wins < scored) {
    why = "generating model won " + std::to_string(wins) + " of " +
          std::to_string(scored);
    return false;
  }

  Rng rng(303);
  for (int round = 0; round < 30; ++round) {
    std::vector<selection::ModelScore> scores(6);
    for (std::size_t m = 0; m < scores.size(); ++m) {
      auto& s = scores[m];
      s.model = "m" + std::to_string(m);
      s.aic = std::floor(rng.uniform() * 4.0);  // coarse values force ties
      s.bic = s.aic;
      s.n_params = 1 + static_cast<std::size_t>(rng.below(3));
      s.n_obs = 10;
      s.one_step_sse = s.aic;
    }
    auto shuffled = scores;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
    }
    const auto first = selection::rank_models(scores, selection::Criterion::Aic);
    const auto second =
        selection::rank_models(shuffled, selection::Criterion::Aic);
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (first[i].model != second[i].model) {
        why = "ranking depends on input order";
        return false;
      }
    }
    for (std::size_t i = 0; i + 1 < first.size(); ++i) {
      const auto& lhs = first[i];
      const auto& rhs = first[i + 1];
      const bool ordered =
          lhs.aic < rhs.aic ||
          (lhs.aic == rhs.aic &&
           (lhs.n_params < rhs.n_params ||
            (lhs.n_params == rhs.n_params && lhs.model < rhs.model)));
      if (!ordered) {
        why = "ranking is not a strict order";
        return false;
      }
    }
  }
  return true;
}

// The simulate-then-fit pipeline emits byte-identical reports for one seed.
bool cli_determinism(std::string& why) {
  const std::string bin = testsupport::cli_binary();
  const auto sim = testsupport::run_shell(
      bin +
      " simulate --model goel-okumoto --params a=50,g=0.1 -T 15 --seed 21"
      " --out acceptance_tmp.csv");
  if (sim.exit_code != 0) {
    why = "simulate exited with " + std::to_string(sim.exit_code);
    return false;
  }
  const std::string fit_cmd =
      bin + " fit --model goel-okumoto --data acceptance_tmp.csv"
            " --no-timestamp --seed 2";
  const auto first = testsupport::run_shell(fit_cmd);
  const auto second = testsupport::run_shell(fit_cmd);
  if (first.exit_code != 0 || second.exit_code != 0) {
    why = "fit exited with " + std::to_string(first.exit_code) + " and " +
          std::to_string(second.exit_code);
    return false;
  }
  if (first.output.empty() ||
      first.output.find("\"schema_version\": 1") == std::string::npos) {
    why = "fit report is missing the schema marker";
    return false;
  }
  if (first.output != second.output) {
    why = "reports differ between identical runs";
    return false;
  }
  return true;
}

struct Criterion {
  int index;
  const char* name;
  bool (*check)(std::string&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "formula-fidelity", formula_fidelity},
      {2, "density-normalization", density_normalization},
      {3, "intensity-derivative", intensity_derivative},
      {4, "estimator-recovery", estimator_recovery},
      {5, "dual-route-agreement", dual_route_agreement},
      {6, "simulation-statistics", simulation_statistics},
      {7, "selection-behavior", selection_behavior},
      {8, "cli-determinism", cli_determinism},
  };
  int failures = 0;
  for (const auto& criterion : criteria) {
    bool passed = false;
    std::string why;
    try {
      passed = criterion.check(why);
    } catch (const std::exception& e) {
      passed = false;
      why = std::string("unexpected exception: ") + e.what();
    }
    if (passed) {
      std::printf("criterion %d %s: PASS\n", criterion.index, criterion.name);
    } else {
      std::printf("criterion %d %s: FAIL (%s)\n", criterion.index,
                  criterion.name, why.c_str());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

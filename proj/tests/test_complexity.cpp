#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "relgrowth/complexity.hpp"
#include "relgrowth/errors.hpp"

using namespace relgrowth;
using namespace relgrowth::complexity;

TEST_CASE("halstead metrics on the symmetric example") {
  const HalsteadReport report = halstead_report({16, 16, 50, 50});
  CHECK(report.vocabulary == 32);
  CHECK(report.length == 100);
  CHECK(report.volume == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(report.effort == doctest::Approx(12500.0).epsilon(1e-12));
  CHECK(report.theoretical_length == doctest::Approx(128.0).epsilon(1e-12));
  CHECK(report.predicted_defects ==
        doctest::Approx(500.0 / 3000.0).epsilon(1e-12));
  CHECK(report.level == doctest::Approx(2.0 * 16 / (16.0 * 50)).epsilon(1e-12));
}

TEST_CASE("halstead degenerate vocabulary") {
  const HalsteadReport report = halstead_report({1, 1, 1, 1});
  CHECK(report.theoretical_length == doctest::Approx(0.0));
  CHECK(report.volume == doctest::Approx(2.0));
  CHECK(report.predicted_defects == doctest::Approx(2.0 / 3000.0));
}

TEST_CASE("halstead volume is linear and effort monotone in length") {
  const HalsteadReport base = halstead_report({16, 16, 50, 50});
  const HalsteadReport doubled = halstead_report({16, 16, 100, 100});
  CHECK(doubled.volume == doctest::Approx(2.0 * base.volume));
  CHECK(doubled.effort > base.effort);
}

TEST_CASE("halstead counts are validated") {
  CHECK_THROWS_AS(halstead_report({0, 1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(halstead_report({2, 1, 1, 1}), ValidationError);
}

TEST_CASE("weighted complexity") {
  CHECK(trw_complexity({10, 5, 5, 5, 10}) == doctest::Approx(12.5));
  CHECK(trw_complexity({0, 0, 0, 0, 0}) == doctest::Approx(0.0));
  CHECK(trw_complexity({10, 5, 5, 5, 11}) < trw_complexity({10, 5, 5, 5, 10}));
}

namespace {

std::vector<TrwSample> synthetic_samples(const std::array<double, 5>& kappa,
                                         double scale = 1.0) {
  const std::vector<TrwFactors> factors = {
      {10, 5, 5, 5, 10}, {1, 0, 0, 0, 0},  {0, 10, 0, 0, 0},
      {0, 0, 10, 0, 0},  {0, 0, 0, 10, 0}, {0, 0, 0, 0, 10},
      {3, 1, 4, 1, 5},
  };
  std::vector<TrwSample> samples;
  for (const TrwFactors& f : factors) {
    TrwModel model{kappa, 0.0};
    samples.push_back({f, scale * trw_predict(model, f)});
  }
  return samples;
}

}  // namespace

TEST_CASE("least squares recovers exact coefficients") {
  const std::array<double, 5> kappa = {1, 2, 3, 4, 5};
  const TrwModel model = trw_fit(synthetic_samples(kappa));
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(model.kappas[j] == doctest::Approx(kappa[j]).epsilon(1e-8));
  }
  CHECK(model.residual_sse == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit needs five samples and independent columns") {
  std::vector<TrwSample> few = synthetic_samples({1, 1, 1, 1, 1});
  few.resize(4);
  CHECK_THROWS_AS(trw_fit(few), InsufficientData);

  // io column locked to the calc column: exact collinearity.
  std::vector<TrwSample> collinear;
  for (double x : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
    collinear.push_back({{x, 2 * x, x, x, 0.0}, 3.0 * x});
  }
  CHECK_THROWS_AS(trw_fit(collinear), RankDeficient);
  try {
    trw_fit(collinear);
  } catch (const RankDeficient& failure) {
    CHECK(std::string(failure.what()).find("c_") != std::string::npos);
  }
}

TEST_CASE("fit is scale-equivariant in the observations") {
  const std::array<double, 5> kappa = {2, -1, 0.5, 3, 1};
  const TrwModel base = trw_fit(synthetic_samples(kappa));
  const TrwModel scaled = trw_fit(synthetic_samples(kappa, 10.0));
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(scaled.kappas[j] ==
          doctest::Approx(10.0 * base.kappas[j]).epsilon(1e-9));
  }
}

TEST_CASE("fit beats the unit-kappa baseline") {
  std::vector<TrwSample> samples = synthetic_samples({1, 2, 3, 4, 5});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i].observed_errors += (i % 2 == 0) ? 0.5 : -0.5;
  }
  const TrwModel model = trw_fit(samples);
  const TrwModel baseline{{1, 1, 1, 1, 1}, 0.0};
  double baseline_sse = 0.0;
  for (const TrwSample& s : samples) {
    const double r = s.observed_errors - trw_predict(baseline, s.factors);
    baseline_sse += r * r;
  }
  CHECK(model.residual_sse <= baseline_sse + 1e-12);
}

TEST_CASE("prediction with unit coefficients reduces to the weighted sum") {
  const TrwModel unit{{1, 1, 1, 1, 1}, 0.0};
  CHECK(trw_predict(unit, {10, 5, 5, 5, 10}) == doctest::Approx(12.5));
  CHECK(trw_predict(unit, {0, 0, 0, 0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("csv sample ingestion") {
  std::istringstream in(
      "l_tot,c_inf,c_c,c_io,u_read,errors\n"
      "10,5,5,5,10,12.5\n"
      "1,0,0,0,0,1\n");
  const std::vector<TrwSample> samples = read_trw_samples(in);
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].observed_errors == doctest::Approx(12.5));
  CHECK(samples[1].factors.logical == doctest::Approx(1.0));

  std::istringstream bad("l_tot,c_inf\n1,2\n");
  CHECK_THROWS_AS(read_trw_samples(bad), ParseError);
}

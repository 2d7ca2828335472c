#include <doctest.h>

#include <cmath>
#include <vector>

#include "relgrowth/datasets.hpp"
#include "relgrowth/errors.hpp"
#include "relgrowth/nhpp.hpp"
#include "relgrowth/rng.hpp"
#include "relgrowth/simulate.hpp"

using namespace relgrowth;
using namespace relgrowth::simulate;

TEST_CASE("jm sampler exhausts the population and matches its mean") {
  const FailureLog all = simulate_jm(5, 0.4, 7);
  CHECK(all.error_count() == 5);
  double sum = 0.0;
  for (double t : all.intervals()) sum += t;
  CHECK(all.total_time() == doctest::Approx(sum));

  const FailureLog cut = simulate_jm(5, 0.4, 7, 0.1);
  CHECK(cut.error_count() <= 5);
  CHECK(cut.total_time() == doctest::Approx(0.1));

  // Single-error population: the first gap is Exp(phi), mean 2.
  double mean = 0.0;
  const int reps = 10000;
  for (int i = 0; i < reps; ++i) {
    const FailureLog one = simulate_jm(1, 0.5, derive_seed(100, i));
    mean += one.intervals()[0];
  }
  mean /= reps;
  const double se = 2.0 / std::sqrt(static_cast<double>(reps));
  CHECK(std::fabs(mean - 2.0) < 3.0 * se);

  CHECK(simulate_jm(5, 0.4, 7).intervals() == all.intervals());
  CHECK(simulate_jm(5, 0.4, 8).intervals() != all.intervals());
  CHECK_THROWS_AS(simulate_jm(0, 0.4, 7), ValidationError);
  CHECK_THROWS_AS(simulate_jm(5, 0.0, 7), ValidationError);
}

TEST_CASE("sw sampler draws rayleigh gaps") {
  const FailureLog all = simulate_sw(4, 0.3, 21);
  CHECK(all.error_count() == 4);

  double mean = 0.0;
  const int reps = 10000;
  for (int i = 0; i < reps; ++i) {
    mean += simulate_sw(1, 1.0, derive_seed(200, i)).intervals()[0];
  }
  mean /= reps;
  const double pi = std::acos(-1.0);
  const double sd = std::sqrt(2.0 - pi / 2.0);
  CHECK(std::fabs(mean - std::sqrt(pi / 2.0)) <
        3.0 * sd / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("nhpp thinning hits the mean-value function") {
  const nhpp::NhppParams go = {{"a", 100.0}, {"g", 0.1}};
  const FailureLog empty =
      simulate_nhpp(nhpp::NhppModelId::GoelOkumoto, go, 0.0, 1);
  CHECK(empty.error_count() == 0);
  CHECK(empty.total_time() == doctest::Approx(0.0));

  double mean = 0.0;
  const int reps = 2000;
  for (int i = 0; i < reps; ++i) {
    mean += static_cast<double>(
        simulate_nhpp(nhpp::NhppModelId::GoelOkumoto, go, 10.0,
                      derive_seed(300, i))
            .error_count());
  }
  mean /= reps;
  const double target = nhpp::mean_value(nhpp::NhppModelId::GoelOkumoto, go,
                                         10.0);
  CHECK(std::fabs(mean - target) <
        3.0 * std::sqrt(target / static_cast<double>(reps)));
}

TEST_CASE("thinning tracks the curve over time, not just at the horizon") {
  const nhpp::NhppParams params = {{"a", 50.0}, {"g", 0.3}};
  const int reps = 3000;
  std::vector<double> counts(3, 0.0);
  const std::vector<double> grid = {2.0, 5.0, 10.0};
  for (int i = 0; i < reps; ++i) {
    const FailureLog log = simulate_nhpp(nhpp::NhppModelId::DelayedS, params,
                                         10.0, derive_seed(400, i));
    const std::vector<double> times = log.cumulative_times();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      for (double s : times) counts[g] += s <= grid[g];
    }
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double expected =
        nhpp::mean_value(nhpp::NhppModelId::DelayedS, params, grid[g]);
    const double empirical = counts[g] / reps;
    CHECK(std::fabs(empirical - expected) / expected < 0.05);
  }
}

TEST_CASE("unbounded-at-zero intensities use piecewise bounds") {
  const nhpp::NhppParams duane = {{"a", 5.0}, {"g", 0.5}};
  double mean = 0.0;
  double first_event = 10.0;
  const int reps = 2000;
  for (int i = 0; i < reps; ++i) {
    const FailureLog log = simulate_nhpp(nhpp::NhppModelId::Duane, duane, 10.0,
                                         derive_seed(500, i));
    mean += static_cast<double>(log.error_count());
    if (log.error_count() > 0) {
      first_event = std::min(first_event, log.cumulative_times()[0]);
    }
  }
  mean /= reps;
  const double target = 5.0 * std::sqrt(10.0);
  CHECK(std::fabs(mean - target) / target < 0.03);
  // Events before the sacrificed prefix [0, T*1e-6) never appear.
  CHECK(first_event >= 10.0 * 1e-6);
}

TEST_CASE("balanced bernoulli run design") {
  const RunProfile profile =
      simulate_runs({0.2, 0.3, 0.5}, {0.0, 1.0, 0.5}, 50, 31);
  REQUIRE(profile.domains().size() == 3);
  CHECK(profile.domains()[0].prob == doctest::Approx(0.2));
  for (const DomainTally& d : profile.domains()) CHECK(d.runs == 50);
  CHECK(profile.domains()[0].failures == 0);
  CHECK(profile.domains()[1].failures == 50);
  CHECK(profile.domains()[2].failures > 10);
  CHECK(profile.domains()[2].failures < 40);

  // Law of large numbers on a single domain.
  const RunProfile big = simulate_runs({1.0}, {0.1}, 100000, 12);
  const double rate = static_cast<double>(big.domains()[0].failures) / 100000.0;
  CHECK(rate > 0.095);
  CHECK(rate < 0.105);

  CHECK_THROWS_AS(simulate_runs({1.0}, {0.1, 0.2}, 10, 1), ValidationError);
  CHECK_THROWS_AS(simulate_runs({1.0}, {0.1}, 0, 1), ValidationError);
  CHECK_THROWS_AS(simulate_runs({1.0}, {1.5}, 10, 1), ValidationError);
}

TEST_CASE("seeding experiment draws an urn without replacement") {
  const SeedingTally tally = simulate_seeding(100, 50, 75, 5);
  CHECK(tally.seeded == 50);
  CHECK(tally.seeded_found + tally.own_found == 75);
  CHECK(tally.seeded_found <= 50);
  CHECK(tally.own_found <= 100);

  const SeedingTally everything = simulate_seeding(100, 50, 150, 5);
  CHECK(everything.seeded_found == 50);
  CHECK(everything.own_found == 100);

  double mean_v = 0.0;
  const int reps = 3000;
  for (int i = 0; i < reps; ++i) {
    mean_v += static_cast<double>(
        simulate_seeding(100, 50, 75, derive_seed(600, i)).seeded_found);
  }
  mean_v /= reps;
  // Hypergeometric: mean 25, variance 75 * (1/3) * (2/3) * 75/149.
  const double se = std::sqrt(75.0 / 9.0 * 2.0 * 75.0 / 149.0 /
                              static_cast<double>(reps));
  CHECK(std::fabs(mean_v - 25.0) < 3.0 * se);

  CHECK_THROWS_AS(simulate_seeding(100, 50, 151, 5), ValidationError);
}

TEST_CASE("upgrade run outcomes follow the stage reliabilities") {
  rundomain::UpgradeModel m;
  m.p0 = 0.6;
  m.p_inf = 0.99;
  m.a1 = 0.3;
  m.a2 = 0.1;
  const std::vector<std::pair<double, double>> ks(10, {1.0, 1.0});
  const UpgradeHistory history = simulate_upgrade(m, ks, 1000, 77);
  REQUIRE(history.stages.size() == 10);
  for (const UpgradeStage& stage : history.stages) {
    CHECK(stage.runs == 1000);
    CHECK(stage.successes <= stage.runs);
    CHECK(stage.k1 == doctest::Approx(1.0));
  }
  const double last =
      static_cast<double>(history.stages.back().successes) / 1000.0;
  const double expected = rundomain::upgrade_reliability(m, history, 10);
  CHECK(std::fabs(last - expected) < 0.05);

  // Same seed, same outcomes.
  const UpgradeHistory again = simulate_upgrade(m, ks, 1000, 77);
  CHECK(again.stages.back().successes == history.stages.back().successes);

  rundomain::UpgradeModel wild = m;
  wild.a1 = 5.0;
  CHECK_THROWS_AS(simulate_upgrade(wild, ks, 10, 1), DomainError);
  CHECK_THROWS_AS(simulate_upgrade(m, ks, 0, 1), ValidationError);
}

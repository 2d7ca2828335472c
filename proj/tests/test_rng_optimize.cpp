#include <doctest.h>

#include <cmath>

#include "relgrowth/optimize.hpp"
#include "relgrowth/rng.hpp"

using namespace relgrowth;

TEST_CASE("rng is deterministic per seed and distinct across seeds") {
  Rng a(42);
  Rng b(42);
  Rng c(43);
  bool all_match = true;
  bool any_differ = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.next_u64();
    all_match = all_match && va == b.next_u64();
    any_differ = any_differ || va != c.next_u64();
  }
  CHECK(all_match);
  CHECK(any_differ);
}

TEST_CASE("uniform draws stay strictly inside (0,1)") {
  Rng rng(7);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("exponential mean matches its rate") {
  Rng rng(11);
  const double rate = 0.25;
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential(rate);
  const double mean = sum / n;
  const double se = (1.0 / rate) / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(mean - 1.0 / rate) < 3.0 * se);
}

TEST_CASE("derive_seed decorrelates replication streams") {
  const std::uint64_t base = 1234;
  CHECK(derive_seed(base, 0) != derive_seed(base, 1));
  CHECK(derive_seed(base, 1) != derive_seed(base + 1, 1));
}

TEST_CASE("nelder_mead solves a smooth quadratic") {
  const ObjectiveFn f = [](const std::vector<double>& x) {
    return (x[0] - 3.0) * (x[0] - 3.0) + (x[1] + 1.0) * (x[1] + 1.0);
  };
  const SimplexResult result = nelder_mead(f, {0.0, 0.0});
  CHECK(result.converged);
  CHECK(result.x[0] == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(result.x[1] == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("multi-start handles the Rosenbrock valley") {
  const ObjectiveFn f = [](const std::vector<double>& x) {
    const double a = 1.0 - x[0];
    const double b = x[1] - x[0] * x[0];
    return a * a + 100.0 * b * b;
  };
  const MultiStartResult result = multi_start_minimize(f, {-1.2, 1.0}, 5);
  CHECK(result.best.fval < 1e-8);
}

TEST_CASE("multi-start is deterministic per seed") {
  const ObjectiveFn f = [](const std::vector<double>& x) {
    return std::cos(x[0]) + x[0] * x[0] * 0.1;
  };
  const MultiStartResult r1 = multi_start_minimize(f, {2.0}, 9);
  const MultiStartResult r2 = multi_start_minimize(f, {2.0}, 9);
  CHECK(r1.best.x[0] == r2.best.x[0]);
  CHECK(r1.best.fval == r2.best.fval);
  CHECK(r1.restart_values == r2.restart_values);
  CHECK(r1.agreeing_restarts(1e-4) >= 2);
}

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace relgrowth {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

struct SimplexOptions {
  int max_iterations = 4000;
  double f_tolerance = 1e-11;  // spread of simplex values at termination
  double x_tolerance = 1e-10;  // simplex diameter at termination
  double initial_step = 0.4;   // per-coordinate offset of the start simplex
};

struct SimplexResult {
  std::vector<double> x;
  double fval = 0.0;
  int iterations = 0;
  bool converged = false;  // tolerance met before the iteration cap
};

/// Derivative-free Nelder-Mead minimization. Non-finite objective values are
/// treated as +inf, so callers may simply return NaN outside the domain.
SimplexResult nelder_mead(const ObjectiveFn& f, std::vector<double> start,
                          const SimplexOptions& options = {});

struct MultiStartOptions {
  int restarts = 8;
  double spread = 1.5;  // half-width of the uniform start perturbation
  SimplexOptions simplex;
};

struct MultiStartResult {
  SimplexResult best;
  std::vector<double> restart_values;  // final objective of each restart
  int total_iterations = 0;

  /// Restarts whose final value lies within `tol` of the best one.
  int agreeing_restarts(double tol) const;
};

/// Seeded multi-restart simplex search: restart 0 starts at `start`, the
/// rest at uniform perturbations of it; every restart is polished by a
/// second simplex pass from its own optimum. Deterministic given the seed.
MultiStartResult multi_start_minimize(const ObjectiveFn& f,
                                      const std::vector<double>& start,
                                      std::uint64_t seed,
                                      const MultiStartOptions& options = {});

}  // namespace relgrowth

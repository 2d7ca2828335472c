#include "relgrowth/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "relgrowth/rng.hpp"

namespace relgrowth {

namespace {

constexpr double kHuge = 1e300;

double guarded(const ObjectiveFn& f, const std::vector<double>& x) {
  const double v = f(x);
  return std::isfinite(v) ? v : kHuge;
}

}  // namespace

SimplexResult nelder_mead(const ObjectiveFn& f, std::vector<double> start,
                          const SimplexOptions& options) {
  const std::size_t dim = start.size();
  SimplexResult result;
  if (dim == 0) {
    result.x = std::move(start);
    result.fval = guarded(f, result.x);
    result.converged = true;
    return result;
  }

  // Standard coefficients: reflection, expansion, contraction, shrink.
  constexpr double kAlpha = 1.0;
  constexpr double kGamma = 2.0;
  constexpr double kRho = 0.5;
  constexpr double kSigma = 0.5;

  std::vector<std::vector<double>> vertex(dim + 1, start);
  for (std::size_t j = 0; j < dim; ++j) {
    const double step =
        options.initial_step * std::max(1.0, std::fabs(start[j]));
    vertex[j + 1][j] += step;
  }
  std::vector<double> fvals(dim + 1);
  for (std::size_t j = 0; j <= dim; ++j) fvals[j] = guarded(f, vertex[j]);

  std::vector<std::size_t> order(dim + 1);
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fvals[a] < fvals[b];
    });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    double diameter = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j <= dim; ++j) {
      for (std::size_t c = 0; c < dim; ++c) {
        diameter = std::max(diameter, std::fabs(vertex[j][c] - vertex[best][c]));
        scale = std::max(scale, std::fabs(vertex[j][c]));
      }
    }
    const double fspread = std::fabs(fvals[worst] - fvals[best]);
    if (fspread <= options.f_tolerance * (1.0 + std::fabs(fvals[best])) &&
        diameter <= options.x_tolerance * (1.0 + scale)) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t j = 0; j <= dim; ++j) {
      if (j == worst) continue;
      for (std::size_t c = 0; c < dim; ++c) centroid[c] += vertex[j][c];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](const std::vector<double>& from, double scale) {
      std::vector<double> p(dim);
      for (std::size_t c = 0; c < dim; ++c) {
        p[c] = centroid[c] + scale * (from[c] - centroid[c]);
      }
      return p;
    };

    const std::vector<double> reflected = blend(vertex[worst], -kAlpha);
    const double f_reflected = guarded(f, reflected);

    if (f_reflected < fvals[best]) {
      const std::vector<double> expanded = blend(vertex[worst], -kAlpha * kGamma);
      const double f_expanded = guarded(f, expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        fvals[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        fvals[worst] = f_reflected;
      }
    } else if (f_reflected < fvals[second_worst]) {
      vertex[worst] = reflected;
      fvals[worst] = f_reflected;
    } else {
      const bool outside = f_reflected < fvals[worst];
      const std::vector<double> contracted =
          outside ? blend(reflected, kRho) : blend(vertex[worst], kRho);
      const double f_contracted = guarded(f, contracted);
      if (f_contracted < (outside ? f_reflected : fvals[worst])) {
        vertex[worst] = contracted;
        fvals[worst] = f_contracted;
      } else {
        for (std::size_t j = 0; j <= dim; ++j) {
          if (j == best) continue;
          for (std::size_t c = 0; c < dim; ++c) {
            vertex[j][c] =
                vertex[best][c] + kSigma * (vertex[j][c] - vertex[best][c]);
          }
          fvals[j] = guarded(f, vertex[j]);
        }
      }
    }
  }

  const std::size_t best = static_cast<std::size_t>(
      std::min_element(fvals.begin(), fvals.end()) - fvals.begin());
  result.x = vertex[best];
  result.fval = fvals[best];
  result.iterations = iter;
  return result;
}

int MultiStartResult::agreeing_restarts(double tol) const {
  int count = 0;
  for (double v : restart_values) {
    if (v <= best.fval + tol) ++count;
  }
  return count;
}

MultiStartResult multi_start_minimize(const ObjectiveFn& f,
                                      const std::vector<double>& start,
                                      std::uint64_t seed,
                                      const MultiStartOptions& options) {
  MultiStartResult out;
  out.best.fval = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<double> x0 = start;
    if (r > 0) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      for (double& c : x0) c += rng.uniform(-options.spread, options.spread);
    }
    SimplexResult run = nelder_mead(f, std::move(x0), options.simplex);
    // Polish: restart the simplex at the found optimum so flat stretches do
    // not freeze a vertex mid-slope.
    SimplexResult polished = nelder_mead(f, run.x, options.simplex);
    if (polished.fval > run.fval) polished = run;
    polished.iterations += run.iterations;
    out.total_iterations += polished.iterations;
    out.restart_values.push_back(polished.fval);
    if (polished.fval < out.best.fval ||
        (polished.fval == out.best.fval && !out.best.converged)) {
      out.best = polished;
    }
  }
  return out;
}

}  // namespace relgrowth

#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "rfpca/errors.hpp"
#include "rfpca/manifold.hpp"
#include "rfpca/types.hpp"
#include "rfpca/vecmath.hpp"

namespace rfpca {

/// Value of the empirical Frechet objective M_n(p) = n^-1 sum d(X_i, p)^2.
inline double frechet_objective(const ManifoldSpec& spec, const std::vector<Point>& points,
                                const Point& p) {
  double s = 0.0;
  for (const auto& x : points) {
    const double d = geodesic_distance(spec, p, x);
    s += d * d;
  }
  return s / static_cast<double>(points.size());
}

/// Intrinsic sample Frechet mean via the fixed-point iteration
/// p <- exp_p(step * mean of log_p(X_i)), stopped when the Riemannian
/// gradient norm falls below config.gradient_tolerance. Starts from the
/// projected ambient average unless `init` is given.
inline Point frechet_mean_point(const ManifoldSpec& spec, const std::vector<Point>& points,
                                const FrechetConfig& config = {},
                                const std::optional<Point>& init = std::nullopt) {
  if (points.empty())
    fail(ErrorKind::DegenerateInput, "frechet mean of an empty point set");
  Point p;
  if (init) {
    p = *init;
  } else {
    Vec avg(spec.ambient_dim, 0.0);
    for (const auto& x : points) {
      detail::check_dim(spec, x.coords, "sample point");
      vm::axpy(1.0, x.coords, avg);
    }
    for (auto& e : avg) e /= static_cast<double>(points.size());
    p = project_to_manifold(spec, avg);
  }
  const double inv_n = 1.0 / static_cast<double>(points.size());
  double grad_norm = 0.0;
  for (int it = 0; it < config.max_iterations; ++it) {
    Vec grad(spec.ambient_dim, 0.0);
    for (const auto& x : points) vm::axpy(inv_n, log_map(spec, p, x).coords, grad);
    grad_norm = vm::norm(grad);
    if (grad_norm <= config.gradient_tolerance) return p;
    p = exp_map(spec, {p, vm::scaled(grad, config.step_size)});
  }
  char grad_text[32];
  std::snprintf(grad_text, sizeof grad_text, "%.3e", grad_norm);
  fail(ErrorKind::NoConvergence,
       "frechet mean not converged after " + std::to_string(config.max_iterations) +
           " iterations; last gradient norm " + grad_text);
}

/// Pointwise Frechet mean curve over the shared grid, warm-started along
/// the grid from the previous converged mean.
inline std::vector<Point> frechet_mean_curve(const ManifoldSpec& spec,
                                             const std::vector<TrajectorySample>& samples,
                                             const FrechetConfig& config = {}) {
  if (samples.empty())
    fail(ErrorKind::DegenerateInput, "frechet mean curve of an empty sample");
  const auto& grid = samples.front().grid;
  const std::size_t m = grid.size();
  for (const auto& s : samples) {
    if (!grids_equal(s.grid, grid))
      fail(ErrorKind::GridMismatch,
           "subject " + s.subject_id + " uses a different grid than subject " +
               samples.front().subject_id);
    if (s.points.size() != m)
      fail(ErrorKind::GridMismatch, "subject " + s.subject_id + " has " +
                                        std::to_string(s.points.size()) + " points for " +
                                        std::to_string(m) + " grid times");
  }
  std::vector<Point> mean(m);
  std::vector<Point> column(samples.size());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < samples.size(); ++i) column[i] = samples[i].points[j];
    std::optional<Point> warm;
    if (j > 0) warm = mean[j - 1];
    try {
      mean[j] = frechet_mean_point(spec, column, config, warm);
    } catch (const Error& e) {
      throw Error(e.kind(), e.detail() + " (at time index " + std::to_string(j) + ")");
    }
  }
  return mean;
}

}  // namespace rfpca

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rfpca/errors.hpp"
#include "rfpca/legendre.hpp"
#include "rfpca/manifold.hpp"
#include "rfpca/rng.hpp"
#include "rfpca/types.hpp"
#include "rfpca/vecmath.hpp"

namespace rfpca {

namespace detail {

inline void check_sim_config(const SimConfig& config) {
  if (config.manifold.kind == ManifoldKind::EuclideanAmbient)
    fail(ErrorKind::DimensionMismatch, "simulation targets sphere or so3 geometries");
  if (config.manifold.kind == ManifoldKind::Sphere && config.manifold.intrinsic_dim != 2)
    fail(ErrorKind::DimensionMismatch, "the simulation design is specified on S^2");
  if (config.n < 1) fail(ErrorKind::DegenerateInput, "need n >= 1 subjects");
  if (config.m < 2) fail(ErrorKind::GridMismatch, "need m >= 2 grid points");
  if (!(config.decay_base > 0.0 && config.decay_base < 1.0))
    fail(ErrorKind::DegenerateInput, "decay base must lie in (0,1)");
  if (config.n_components < 1 || config.n_components > kMaxLegendreDegree)
    fail(ErrorKind::KOutOfRange, "component count outside [1, 20]");
}

// The design's tangent triples at the sphere base point [0,0,1] put the
// first two entries on e1, e2; the third multiplies the normal direction
// and is always zero.
inline Vec sphere_base_tangent(double a, double b) { return {a, b, 0.0}; }

}  // namespace detail

/// Score variance of the k-th component, decay_base^(k/2).
inline double score_variance(const SimConfig& config, int k) {
  return std::pow(config.decay_base, 0.5 * k);
}

/// Tangent-space fraction of variance explained implied by the score law,
/// for K = 1..n_components.
inline std::vector<double> theoretical_tangent_fve(const SimConfig& config) {
  double total = 0.0;
  for (int k = 1; k <= config.n_components; ++k) total += score_variance(config, k);
  std::vector<double> fve(config.n_components);
  double partial = 0.0;
  for (int k = 1; k <= config.n_components; ++k) {
    partial += score_variance(config, k);
    fve[k - 1] = partial / total;
  }
  return fve;
}

/// Mean curve of the simulation design on the uniform grid:
/// exp_{[0,0,1]}(2t, 0.3*pi*sin(pi*t), 0) on the sphere and
/// Exp(iota(2t, 0.3*pi*sin(pi*t), 0)) on SO(3).
inline std::vector<Point> gen_mean_curve(const SimConfig& config) {
  detail::check_sim_config(config);
  const auto grid = uniform_grid(config.m);
  std::vector<Point> mean(config.m);
  for (int j = 0; j < config.m; ++j) {
    const double t = grid[j];
    const double a = 2.0 * t;
    const double b = 0.3 * M_PI * std::sin(M_PI * t);
    if (config.manifold.kind == ManifoldKind::Sphere) {
      const Point north{{0.0, 0.0, 1.0}};
      mean[j] = exp_map(config.manifold, {north, detail::sphere_base_tangent(a, b)});
    } else {
      mean[j] = {detail::so3_exp_skew(iota_embed(a, b, 0.0))};
    }
  }
  return mean;
}

/// Eigenfunctions of the design, evaluated on the grid:
/// phi_k(t) = 2^{-1/2} R_t [zeta_k(t/2), zeta_k((t+1)/2), 0]^T on the
/// sphere, with R_t the rotation from [0,0,1] to the mean curve, and
/// phi_k(t) = 6^{-1/2} iota(zeta_k(t/3), zeta_k((t+1)/3), zeta_k((t+2)/3))
/// on SO(3).
inline std::vector<std::vector<Vec>> gen_eigenfunctions(const SimConfig& config) {
  detail::check_sim_config(config);
  const auto grid = uniform_grid(config.m);
  const auto mean = gen_mean_curve(config);
  std::vector<std::vector<Vec>> phi(config.n_components, std::vector<Vec>(config.m));
  for (int j = 0; j < config.m; ++j) {
    const double t = grid[j];
    if (config.manifold.kind == ManifoldKind::Sphere) {
      const Vec rot = rotation_between({0.0, 0.0, 1.0}, mean[j].coords);
      for (int k = 1; k <= config.n_components; ++k) {
        const Vec base = detail::sphere_base_tangent(legendre_basis(k, t / 2.0),
                                                     legendre_basis(k, (t + 1.0) / 2.0));
        phi[k - 1][j] = vm::scaled(vm::mat_vec(rot, base, 3), 1.0 / std::sqrt(2.0));
      }
    } else {
      for (int k = 1; k <= config.n_components; ++k) {
        phi[k - 1][j] = vm::scaled(
            iota_embed(legendre_basis(k, t / 3.0), legendre_basis(k, (t + 1.0) / 3.0),
                       legendre_basis(k, (t + 2.0) / 3.0)),
            1.0 / std::sqrt(6.0));
      }
    }
  }
  return phi;
}

struct SimData {
  std::vector<TrajectorySample> samples;
  std::vector<std::vector<double>> scores;     // n x n_components, the true xi_ik
  std::vector<std::vector<Vec>> tangent_fields;  // n x m, true W_i(t_j)
  std::vector<Point> mean_curve;
  std::vector<std::vector<Vec>> eigenfunctions;
};

/// Draws X_i(t) = exp_{mu(t)}(sum_k xi_ik phi_k(t)) with xi_ik Gaussian,
/// mean zero, variance decay_base^(k/2). Scores are keyed by
/// (seed, subject, component), so subject i's draw is the same whether it
/// is generated alone or as part of a larger sample.
inline SimData gen_samples(const SimConfig& config) {
  detail::check_sim_config(config);
  SimData data;
  data.mean_curve = gen_mean_curve(config);
  data.eigenfunctions = gen_eigenfunctions(config);
  const auto grid = uniform_grid(config.m);
  data.samples.resize(config.n);
  data.scores.assign(config.n, std::vector<double>(config.n_components, 0.0));
  data.tangent_fields.assign(config.n, std::vector<Vec>(config.m));
  for (int i = 0; i < config.n; ++i) {
    auto& s = data.samples[i];
    char buf[24];
    std::snprintf(buf, sizeof buf, "s%04d", i + 1);
    s.subject_id = buf;
    s.grid = grid;
    s.points.resize(config.m);
    for (int k = 1; k <= config.n_components; ++k)
      data.scores[i][k - 1] = std::sqrt(score_variance(config, k)) *
                              rng::normal(config.seed, static_cast<std::uint64_t>(i), k);
    for (int j = 0; j < config.m; ++j) {
      Vec w(config.manifold.ambient_dim, 0.0);
      for (int k = 0; k < config.n_components; ++k)
        vm::axpy(data.scores[i][k], data.eigenfunctions[k][j], w);
      data.tangent_fields[i][j] = w;
      s.points[j] = exp_map(config.manifold, {data.mean_curve[j], std::move(w)});
    }
  }
  return data;
}

}  // namespace rfpca

#pragma once

// Test-only helpers: random point generators and independent oracles
// (numerical matrix log, grid-search Frechet mean, direct kernel
// averages) kept away from the library code paths they check.

#include <cmath>
#include <random>
#include <vector>

#include "rfpca/manifold.hpp"
#include "rfpca/types.hpp"
#include "rfpca/vecmath.hpp"

namespace testsupport {

using rfpca::Point;
using rfpca::Vec;

inline Point random_sphere_point(std::mt19937_64& gen, int d0) {
  std::normal_distribution<double> normal;
  Vec x(d0);
  double n = 0.0;
  do {
    for (auto& e : x) e = normal(gen);
    n = rfpca::vm::norm(x);
  } while (n < 1e-6);
  for (auto& e : x) e /= n;
  return {x};
}

// Random rotation with angle bounded away from pi, so logs stay defined.
inline Point random_so3_point(std::mt19937_64& gen, double max_angle = 2.8) {
  std::normal_distribution<double> normal;
  Vec axis{normal(gen), normal(gen), normal(gen)};
  const double n = rfpca::vm::norm(axis);
  std::uniform_real_distribution<double> uangle(0.0, max_angle);
  const double theta = n < 1e-12 ? 0.0 : uangle(gen);
  for (auto& e : axis) e *= (n < 1e-12 ? 0.0 : theta / n);
  return {rfpca::detail::so3_exp_skew(rfpca::iota_embed(axis[0], axis[1], axis[2]))};
}

inline Point random_point(std::mt19937_64& gen, const rfpca::ManifoldSpec& spec) {
  if (spec.kind == rfpca::ManifoldKind::Sphere) return random_sphere_point(gen, spec.ambient_dim);
  return random_so3_point(gen);
}

// Random tangent vector at p with the given metric norm.
inline rfpca::TangentVector random_tangent(std::mt19937_64& gen, const rfpca::ManifoldSpec& spec,
                                           const Point& p, double length) {
  std::normal_distribution<double> normal;
  if (spec.kind == rfpca::ManifoldKind::Sphere) {
    Vec v(spec.ambient_dim);
    double n = 0.0;
    do {
      for (auto& e : v) e = normal(gen);
      rfpca::vm::axpy(-rfpca::vm::dot(v, p.coords), p.coords, v);
      n = rfpca::vm::norm(v);
    } while (n < 1e-6);
    for (auto& e : v) e *= length / n;
    return {p, v};
  }
  Vec abc{normal(gen), normal(gen), normal(gen)};
  const double n = rfpca::vm::norm(abc);
  for (auto& e : abc) e *= length / (std::sqrt(2.0) * n);  // Frobenius norm = length
  return {p, rfpca::iota_embed(abc[0], abc[1], abc[2])};
}

// ---------------------------------------------------------------------
// Oracle 1: numerical matrix logarithm by inverse scaling-and-squaring.
// Square roots via the Denman-Beavers iteration until close to I, then
// the Taylor series of log(I + E). Independent of the closed-form
// axis-angle path used by the library.
// ---------------------------------------------------------------------

inline Vec db_sqrt(const Vec& a) {
  using namespace rfpca::vm;
  Vec y = a, z = mat_identity(3);
  for (int it = 0; it < 100; ++it) {
    const Vec yi = inv3(y, det3(y));
    const Vec zi = inv3(z, det3(z));
    Vec yn(9), zn(9);
    for (int i = 0; i < 9; ++i) {
      yn[i] = 0.5 * (y[i] + zi[i]);
      zn[i] = 0.5 * (z[i] + yi[i]);
    }
    double delta = 0.0;
    for (int i = 0; i < 9; ++i) delta += (yn[i] - y[i]) * (yn[i] - y[i]);
    y = yn;
    z = zn;
    if (std::sqrt(delta) < 1e-15) break;
  }
  return y;
}

inline Vec numerical_matrix_log(Vec r) {
  using namespace rfpca::vm;
  int doublings = 0;
  auto dist_to_identity = [](const Vec& m) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double d = m[i * 3 + j] - (i == j ? 1.0 : 0.0);
        s += d * d;
      }
    return std::sqrt(s);
  };
  while (dist_to_identity(r) > 0.25 && doublings < 40) {
    r = db_sqrt(r);
    ++doublings;
  }
  Vec e(9);
  for (int i = 0; i < 9; ++i) e[i] = r[i];
  for (int i = 0; i < 3; ++i) e[i * 3 + i] -= 1.0;
  Vec term = e;
  Vec log_r(9, 0.0);
  for (int n = 1; n <= 60; ++n) {
    const double sign = n % 2 == 1 ? 1.0 : -1.0;
    for (int i = 0; i < 9; ++i) log_r[i] += sign / n * term[i];
    term = mat_mul(term, e, 3);
  }
  const double scale = std::pow(2.0, doublings);
  for (auto& v : log_r) v *= scale;
  return log_r;
}

// ---------------------------------------------------------------------
// Oracle 2: two-stage grid search for the Frechet mean on S^2 at 1e-3
// angular resolution: a coarse sweep over the whole sphere, then a fine
// local grid around the coarse winner.
// ---------------------------------------------------------------------

inline Point grid_search_frechet_mean_s2(const std::vector<Point>& points) {
  const auto spec = rfpca::make_sphere(2);
  auto objective = [&](const Point& p) {
    double s = 0.0;
    for (const auto& x : points) {
      const double d = rfpca::geodesic_distance(spec, p, x);
      s += d * d;
    }
    return s;
  };
  auto from_angles = [](double theta, double phi) {
    return Point{{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                  std::cos(theta)}};
  };
  double best_theta = 0.0, best_phi = 0.0, best = objective(from_angles(0.0, 0.0));
  const double coarse = 0.02;
  for (double theta = 0.0; theta <= M_PI + 1e-12; theta += coarse)
    for (double phi = 0.0; phi < 2.0 * M_PI; phi += coarse) {
      const double val = objective(from_angles(theta, phi));
      if (val < best) {
        best = val;
        best_theta = theta;
        best_phi = phi;
      }
    }
  const double fine = 1e-3;
  double ft = best_theta, fp = best_phi;
  for (double theta = best_theta - 1.5 * coarse; theta <= best_theta + 1.5 * coarse;
       theta += fine)
    for (double phi = best_phi - 1.5 * coarse; phi <= best_phi + 1.5 * coarse; phi += fine) {
      const double val = objective(from_angles(theta, phi));
      if (val < best) {
        best = val;
        ft = theta;
        fp = phi;
      }
    }
  return from_angles(ft, fp);
}

}  // namespace testsupport

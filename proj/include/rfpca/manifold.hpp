#pragma once

#include <array>
#include <cmath>
#include <string>

#include "rfpca/errors.hpp"
#include "rfpca/types.hpp"
#include "rfpca/vecmath.hpp"

namespace rfpca {

inline constexpr double kAntipodalTol = 1e-10;   // on the sphere inner product
inline constexpr double kSo3AngleTol = 1e-6;     // slack below pi for SO(3) logs
inline constexpr double kSmallAngle = 1e-6;      // Taylor fallback threshold
inline constexpr double kTangencyTol = 1e-6;     // exp_map rejects beyond this

namespace detail {

inline void check_dim(const ManifoldSpec& spec, const Vec& coords, const char* what) {
  if (static_cast<int>(coords.size()) != spec.ambient_dim)
    fail(ErrorKind::DimensionMismatch,
         std::string(what) + " has length " + std::to_string(coords.size()) +
             ", expected " + std::to_string(spec.ambient_dim));
}

// Rotation angle of a flattened 3x3 rotation. The trace formula loses
// half the digits near zero, so small angles come from the skew part,
// whose Frobenius norm is 2*sqrt(2)*sin(theta).
inline double rotation_angle(const Vec& r) {
  const double c = vm::clamp_unit((r[0] + r[4] + r[8] - 1.0) / 2.0);
  if (c <= 0.5) return std::acos(c);
  double s2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) {
      const double d = r[i * 3 + j] - r[j * 3 + i];
      s2 += 2.0 * d * d;
    }
  return std::asin(std::min(1.0, std::sqrt(s2 / 8.0)));
}

// Closed-form matrix exponential of a flattened skew matrix (Rodrigues),
// with the quadratic Taylor fallback below kSmallAngle.
inline Vec so3_exp_skew(const Vec& s) {
  const double a = s[3], b = s[6], c = s[7];
  const double theta = std::sqrt(a * a + b * b + c * c);
  Vec s2 = vm::mat_mul(s, s, 3);
  Vec r = vm::mat_identity(3);
  double c1, c2;
  if (theta < kSmallAngle) {
    c1 = 1.0;
    c2 = 0.5;
  } else {
    c1 = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / (theta * theta);
  }
  for (int i = 0; i < 9; ++i) r[i] += c1 * s[i] + c2 * s2[i];
  return r;
}

// Matrix logarithm of a flattened rotation. Undefined within kSo3AngleTol
// of the cut locus at angle pi, where the skew part vanishes.
inline Vec so3_log_rotation(const Vec& r) {
  const double theta = rotation_angle(r);
  if (theta > M_PI - kSo3AngleTol)
    fail(ErrorKind::LogUndefined,
         "rotation angle " + std::to_string(theta) + " too close to pi");
  const double scale = theta < kSmallAngle ? 0.5 : theta / (2.0 * std::sin(theta));
  Vec s(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s[i * 3 + j] = scale * (r[i * 3 + j] - r[j * 3 + i]);
  return s;
}

}  // namespace detail

/// Deviation of raw ambient coordinates from the manifold invariants:
/// |norm - 1| for the sphere, max entrywise |R^T R - I| and |det - 1|
/// for SO(3). Zero for the flat baseline geometry.
inline double manifold_deviation(const ManifoldSpec& spec, const Vec& coords) {
  detail::check_dim(spec, coords, "point");
  switch (spec.kind) {
    case ManifoldKind::Sphere:
      return std::abs(vm::norm(coords) - 1.0);
    case ManifoldKind::SpecialOrthogonal3: {
      const Vec rtr = vm::mat_mul(vm::mat_transpose(coords, 3), coords, 3);
      double dev = std::abs(vm::det3(coords) - 1.0);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double target = i == j ? 1.0 : 0.0;
          dev = std::max(dev, std::abs(rtr[i * 3 + j] - target));
        }
      return dev;
    }
    case ManifoldKind::EuclideanAmbient:
      return 0.0;
  }
  return 0.0;
}

inline void validate_point(const ManifoldSpec& spec, const Point& p, double tol = 1e-9) {
  const double dev = manifold_deviation(spec, p.coords);
  if (dev > tol)
    fail(ErrorKind::OffManifold, "point deviates from manifold by " + std::to_string(dev));
}

inline double geodesic_distance(const ManifoldSpec& spec, const Point& p, const Point& q) {
  detail::check_dim(spec, p.coords, "point p");
  detail::check_dim(spec, q.coords, "point q");
  switch (spec.kind) {
    case ManifoldKind::Sphere: {
      const double c = vm::clamp_unit(vm::dot(p.coords, q.coords));
      if (c <= 0.5) return std::acos(c);
      // Close points: the chord length conditions much better than the
      // clamped inner product.
      return 2.0 * std::asin(std::min(1.0, 0.5 * vm::dist(p.coords, q.coords)));
    }
    case ManifoldKind::SpecialOrthogonal3: {
      // d = ||Log(q p^T)||_F = sqrt(2) * angle(q p^T); the angle comes from
      // the trace, so the distance stays defined at the cut locus.
      const Vec rel = vm::mat_mul(q.coords, vm::mat_transpose(p.coords, 3), 3);
      return std::sqrt(2.0) * detail::rotation_angle(rel);
    }
    case ManifoldKind::EuclideanAmbient:
      return vm::dist(p.coords, q.coords);
  }
  return 0.0;
}

inline Point exp_map(const ManifoldSpec& spec, const TangentVector& v) {
  detail::check_dim(spec, v.base.coords, "base point");
  detail::check_dim(spec, v.coords, "tangent vector");
  switch (spec.kind) {
    case ManifoldKind::Sphere: {
      if (std::abs(vm::dot(v.coords, v.base.coords)) > kTangencyTol)
        fail(ErrorKind::InvalidTangent, "vector is not orthogonal to its base point");
      const double r = vm::norm(v.coords);
      if (r == 0.0) return v.base;
      Vec out = vm::scaled(v.base.coords, std::cos(r));
      vm::axpy(std::sin(r) / r, v.coords, out);
      return {out};
    }
    case ManifoldKind::SpecialOrthogonal3: {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j)
          if (std::abs(v.coords[i * 3 + j] + v.coords[j * 3 + i]) > kTangencyTol)
            fail(ErrorKind::InvalidTangent, "matrix is not skew-symmetric");
      return {vm::mat_mul(detail::so3_exp_skew(v.coords), v.base.coords, 3)};
    }
    case ManifoldKind::EuclideanAmbient:
      return {vm::add(v.base.coords, v.coords)};
  }
  return v.base;
}

inline TangentVector log_map(const ManifoldSpec& spec, const Point& p, const Point& q) {
  detail::check_dim(spec, p.coords, "point p");
  detail::check_dim(spec, q.coords, "point q");
  if (p.coords == q.coords) return {p, Vec(p.coords.size(), 0.0)};
  switch (spec.kind) {
    case ManifoldKind::Sphere: {
      const double c = vm::clamp_unit(vm::dot(p.coords, q.coords));
      if (c <= -1.0 + kAntipodalTol)
        fail(ErrorKind::LogUndefined, "points are antipodal; log map direction undefined");
      Vec u = q.coords;
      vm::axpy(-vm::dot(p.coords, q.coords), p.coords, u);
      const double un = vm::norm(u);
      if (un < 1e-14) return {p, Vec(p.coords.size(), 0.0)};
      return {p, vm::scaled(u, std::acos(c) / un)};
    }
    case ManifoldKind::SpecialOrthogonal3: {
      const Vec rel = vm::mat_mul(q.coords, vm::mat_transpose(p.coords, 3), 3);
      return {p, detail::so3_log_rotation(rel)};
    }
    case ManifoldKind::EuclideanAmbient:
      return {p, vm::sub(q.coords, p.coords)};
  }
  return {p, {}};
}

/// Numerical cleanup onto the manifold: normalization for the sphere,
/// polar projection (nearest rotation) for SO(3).
inline Point project_to_manifold(const ManifoldSpec& spec, const Vec& raw) {
  detail::check_dim(spec, raw, "raw vector");
  switch (spec.kind) {
    case ManifoldKind::Sphere: {
      const double r = vm::norm(raw);
      if (r < 1e-14) fail(ErrorKind::DegenerateInput, "cannot project the zero vector");
      return {vm::scaled(raw, 1.0 / r)};
    }
    case ManifoldKind::SpecialOrthogonal3: {
      double det = vm::det3(raw);
      if (std::abs(det) < 1e-14)
        fail(ErrorKind::DegenerateInput, "cannot project a singular matrix");
      // Newton iteration X <- (X + X^-T)/2 converges to the orthogonal
      // polar factor.
      Vec x = raw;
      for (int it = 0; it < 100; ++it) {
        det = vm::det3(x);
        if (std::abs(det) < 1e-14)
          fail(ErrorKind::DegenerateInput, "polar iteration hit a singular matrix");
        const Vec xinvt = vm::mat_transpose(vm::inv3(x, det), 3);
        double delta = 0.0;
        for (int i = 0; i < 9; ++i) {
          const double next = 0.5 * (x[i] + xinvt[i]);
          delta += (next - x[i]) * (next - x[i]);
          x[i] = next;
        }
        if (std::sqrt(delta) <= 1e-12) break;
      }
      if (vm::det3(x) < 0.0) {
        // A reflection: flip along the input's smallest principal stretch
        // to land on the nearest proper rotation. The eigenvector of
        // raw^T raw with smallest eigenvalue gives that direction.
        const Vec gram = vm::mat_mul(vm::mat_transpose(raw, 3), raw, 3);
        // 3x3 power iteration on (c*I - gram) isolates the smallest eigenpair.
        double shift = 0.0;
        for (int i = 0; i < 3; ++i) shift = std::max(shift, std::abs(gram[i * 3 + i]) * 3);
        Vec shifted(9);
        for (int i = 0; i < 9; ++i) shifted[i] = -gram[i];
        for (int i = 0; i < 3; ++i) shifted[i * 3 + i] += shift;
        Vec v = {1.0, 0.7, 0.4};
        for (int it = 0; it < 200; ++it) {
          v = vm::mat_vec(shifted, v, 3);
          const double nv = vm::norm(v);
          if (nv < 1e-300) fail(ErrorKind::DegenerateInput, "polar sign correction failed");
          for (auto& e : v) e /= nv;
        }
        Vec flip = vm::mat_identity(3);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) flip[i * 3 + j] -= 2.0 * v[i] * v[j];
        x = vm::mat_mul(x, flip, 3);
      }
      return {x};
    }
    case ManifoldKind::EuclideanAmbient:
      return {raw};
  }
  return {raw};
}

/// Minimal rotation of R^{d+1} taking unit vector a to unit vector b,
/// acting as the identity on the orthogonal complement of span{a, b}.
inline Vec rotation_between(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    fail(ErrorKind::DimensionMismatch, "rotation endpoints have different lengths");
  const std::size_t n = a.size();
  const double c = vm::clamp_unit(vm::dot(a, b));
  if (c <= -1.0 + kAntipodalTol)
    fail(ErrorKind::AntipodalPair, "rotation between antipodal points is not unique");
  Vec w = b;
  vm::axpy(-vm::dot(a, b), a, w);
  const double wn = vm::norm(w);
  if (wn < 1e-12) return vm::mat_identity(n);
  for (auto& e : w) e /= wn;
  const double theta = std::acos(c);
  const double s = std::sin(theta);
  Vec r = vm::mat_identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r[i * n + j] += s * (w[i] * a[j] - a[i] * w[j]) +
                      (c - 1.0) * (a[i] * a[j] + w[i] * w[j]);
  return r;
}

/// iota(a, b, c) = [0, -a, -b; a, 0, -c; b, c, 0], the identification of
/// R^3 with skew-symmetric matrices used on SO(3).
inline Vec iota_embed(double a, double b, double c) {
  return {0.0, -a, -b, a, 0.0, -c, b, c, 0.0};
}

inline std::array<double, 3> iota_extract(const Vec& skew) {
  if (skew.size() != 9) fail(ErrorKind::DimensionMismatch, "iota_extract needs a 3x3 matrix");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(skew[i * 3 + j] + skew[j * 3 + i]) > 1e-9)
        fail(ErrorKind::NotSkew, "matrix is not skew-symmetric");
  return {skew[3], skew[6], skew[7]};
}

}  // namespace rfpca

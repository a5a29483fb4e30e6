#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace rfpca {

using Vec = std::vector<double>;

namespace vm {

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline Vec scaled(const Vec& a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline void axpy(double c, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline double clamp_unit(double x) { return x > 1.0 ? 1.0 : (x < -1.0 ? -1.0 : x); }

// Dense row-major n x n helpers, used for 3x3 rotation algebra and the
// rotation_between construction on S^d.

inline Vec mat_identity(std::size_t n) {
  Vec m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return m;
}

inline Vec mat_mul(const Vec& a, const Vec& b, std::size_t n) {
  Vec c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

inline Vec mat_transpose(const Vec& a, std::size_t n) {
  Vec t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[j * n + i] = a[i * n + j];
  return t;
}

inline Vec mat_vec(const Vec& a, const Vec& x, std::size_t n) {
  Vec y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
    y[i] = s;
  }
  return y;
}

inline double det3(const Vec& a) {
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

// Adjugate-based 3x3 inverse; caller checks the determinant.
inline Vec inv3(const Vec& a, double det) {
  Vec r(9);
  const double s = 1.0 / det;
  r[0] = s * (a[4] * a[8] - a[5] * a[7]);
  r[1] = s * (a[2] * a[7] - a[1] * a[8]);
  r[2] = s * (a[1] * a[5] - a[2] * a[4]);
  r[3] = s * (a[5] * a[6] - a[3] * a[8]);
  r[4] = s * (a[0] * a[8] - a[2] * a[6]);
  r[5] = s * (a[2] * a[3] - a[0] * a[5]);
  r[6] = s * (a[3] * a[7] - a[4] * a[6]);
  r[7] = s * (a[1] * a[6] - a[0] * a[7]);
  r[8] = s * (a[0] * a[4] - a[1] * a[3]);
  return r;
}

}  // namespace vm
}  // namespace rfpca

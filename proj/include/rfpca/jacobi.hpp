#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rfpca/errors.hpp"
#include "rfpca/vecmath.hpp"

namespace rfpca {

struct EigenDecomposition {
  std::vector<double> values;      // unsorted, as left on the diagonal
  std::vector<Vec> vectors;        // vectors[k] is the k-th eigenvector
};

/// Cyclic Jacobi diagonalization of a symmetric matrix (row-major n x n).
/// Sweeps zero each off-diagonal entry in a fixed order until the
/// off-diagonal Frobenius norm drops to `tol`; deterministic for a given
/// input, which the fit pipeline relies on for reproducible signs.
inline EigenDecomposition jacobi_eigen_symmetric(Vec a, std::size_t n, double tol = 1e-12,
                                                 int max_sweeps = 64) {
  Vec v = vm::mat_identity(n);
  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
    return std::sqrt(2.0 * s);
  };
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol) break;
    if (sweep == max_sweeps - 1)
      fail(ErrorKind::NoConvergence,
           "jacobi sweeps exhausted at off-diagonal norm " + std::to_string(off_norm()));
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        // Skip rotations that cannot change anything at double precision.
        if (std::abs(apq) < 1e-300 ||
            std::abs(apq) <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a[p * n + q] = a[q * n + p] = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a[i * n + p];
          const double aiq = a[i * n + q];
          a[i * n + p] = a[p * n + i] = aip - s * (aiq + tau * aip);
          a[i * n + q] = a[q * n + i] = aiq + s * (aip - tau * aiq);
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v[p * n + i];
          const double viq = v[q * n + i];
          v[p * n + i] = vip - s * (viq + tau * vip);
          v[q * n + i] = viq + s * (vip - tau * viq);
        }
      }
    }
  }
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a[k * n + k];
    out.vectors[k].assign(v.begin() + k * n, v.begin() + (k + 1) * n);
  }
  return out;
}

}  // namespace rfpca

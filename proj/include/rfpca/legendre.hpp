#pragma once

#include <string>

#include "rfpca/errors.hpp"

namespace rfpca {

inline constexpr int kMaxLegendreDegree = 20;

/// Orthonormal shifted Legendre polynomial of degree k on [0,1]:
/// zeta_k(t) = sqrt(2k+1) * P_k(2t - 1), so that the integral of
/// zeta_j * zeta_k over [0,1] is delta_jk. Indexing starts at the first
/// non-constant element, zeta_1(t) = sqrt(3)(2t - 1).
inline double legendre_basis(int k, double t) {
  if (k < 1 || k > kMaxLegendreDegree)
    fail(ErrorKind::KOutOfRange,
         "legendre degree " + std::to_string(k) + " outside [1, " +
             std::to_string(kMaxLegendreDegree) + "]");
  const double x = 2.0 * t - 1.0;
  double pkm1 = 1.0;  // P_0
  double pk = x;      // P_1
  for (int deg = 1; deg < k; ++deg) {
    const double pkp1 = ((2.0 * deg + 1.0) * x * pk - deg * pkm1) / (deg + 1.0);
    pkm1 = pk;
    pk = pkp1;
  }
  return std::sqrt(2.0 * k + 1.0) * pk;
}

}  // namespace rfpca

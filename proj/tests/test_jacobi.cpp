#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "rfpca/jacobi.hpp"
#include "rfpca/vecmath.hpp"

using namespace rfpca;

namespace {

// Residual ||A v - w v|| for every returned pair.
double max_pair_residual(const Vec& a, const EigenDecomposition& eig, std::size_t n) {
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0.0;
      for (std::size_t j = 0; j < n; ++j) av += a[i * n + j] * eig.vectors[k][j];
      worst = std::max(worst, std::abs(av - eig.values[k] * eig.vectors[k][i]));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("jacobi on a known 2x2") {
  // [[2,1],[1,2]] has eigenvalues 3 and 1.
  const auto eig = jacobi_eigen_symmetric({2, 1, 1, 2}, 2);
  std::vector<double> vals = eig.values;
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == Catch::Approx(1.0));
  CHECK(vals[1] == Catch::Approx(3.0));
}

TEST_CASE("jacobi on random symmetric matrices") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  for (std::size_t n : {3ul, 7ul, 40ul}) {
    Vec a(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a[i * n + j] = a[j * n + i] = normal(gen);
    const auto eig = jacobi_eigen_symmetric(a, n);
    CHECK(max_pair_residual(a, eig, n) < 1e-10);
    // Orthonormal vectors.
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l <= k; ++l)
        CHECK(vm::dot(eig.vectors[k], eig.vectors[l]) ==
              Catch::Approx(k == l ? 1.0 : 0.0).margin(1e-12));
    // Trace is preserved.
    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      trace += a[i * n + i];
      sum += eig.values[i];
    }
    CHECK(sum == Catch::Approx(trace).margin(1e-10));
  }
}

TEST_CASE("jacobi on a rank-deficient gram matrix") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal;
  const std::size_t n = 30, rank = 4;
  std::vector<Vec> factors(rank, Vec(n));
  for (auto& f : factors)
    for (auto& e : f) e = normal(gen);
  Vec a(n * n, 0.0);
  for (const auto& f : factors)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i * n + j] += f[i] * f[j];
  auto eig = jacobi_eigen_symmetric(a, n);
  std::sort(eig.values.begin(), eig.values.end(), std::greater<>());
  for (std::size_t k = 0; k < rank; ++k) CHECK(eig.values[k] > 1.0);
  for (std::size_t k = rank; k < n; ++k) CHECK(std::abs(eig.values[k]) < 1e-10);
}

TEST_CASE("jacobi is deterministic") {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> normal;
  const std::size_t n = 12;
  Vec a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a[i * n + j] = a[j * n + i] = normal(gen);
  const auto e1 = jacobi_eigen_symmetric(a, n);
  const auto e2 = jacobi_eigen_symmetric(a, n);
  CHECK(e1.values == e2.values);
  CHECK(e1.vectors == e2.vectors);
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfpca/errors.hpp"
#include "rfpca/vecmath.hpp"

namespace rfpca {

enum class ManifoldKind {
  Sphere,              // S^d embedded in R^{d+1}
  SpecialOrthogonal3,  // SO(3), points are flattened 3x3 row-major rotations
  EuclideanAmbient,    // flat geometry used by the L^2 baseline
};

inline const char* to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Sphere: return "sphere";
    case ManifoldKind::SpecialOrthogonal3: return "so3";
    case ManifoldKind::EuclideanAmbient: return "euclidean-ambient";
  }
  return "unknown";
}

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Sphere;
  int intrinsic_dim = 2;
  int ambient_dim = 3;
};

inline ManifoldSpec make_sphere(int d) {
  if (d < 1) fail(ErrorKind::DimensionMismatch, "sphere intrinsic dimension must be >= 1");
  return {ManifoldKind::Sphere, d, d + 1};
}

inline ManifoldSpec make_so3() { return {ManifoldKind::SpecialOrthogonal3, 3, 9}; }

inline ManifoldSpec make_euclidean(int d0) {
  if (d0 < 1) fail(ErrorKind::DimensionMismatch, "ambient dimension must be >= 1");
  return {ManifoldKind::EuclideanAmbient, d0, d0};
}

/// A point on the manifold, stored in ambient coordinates
/// (unit vector on the sphere; flattened row-major rotation on SO(3)).
struct Point {
  Vec coords;
};

/// Tangent vector in ambient coordinates at `base`. On SO(3) the coords
/// reshape to a skew-symmetric matrix (right-translated identification),
/// so the flat inner product of coords equals tr(u^T v).
struct TangentVector {
  Point base;
  Vec coords;
};

/// One subject's fully observed curve on a shared uniform grid over [0,1].
struct TrajectorySample {
  std::string subject_id;
  std::vector<double> grid;
  std::vector<Point> points;
};

/// Log-mapped curve at the mean function, one ambient vector per grid time.
struct TangentProcess {
  std::string subject_id;
  std::vector<double> grid;
  std::vector<Vec> vectors;
};

struct FrechetConfig {
  int max_iterations = 200;
  double gradient_tolerance = 1e-10;
  double step_size = 1.0;
};

/// Fitted model: mean curve, spectral pairs on the grid, per-subject
/// scores, and the geodesic fraction-of-variance-explained sequence.
struct RfpcaModel {
  ManifoldSpec spec;
  std::vector<double> grid;                      // m
  std::vector<Point> mean_curve;                 // m
  std::vector<double> eigenvalues;               // K_max, nonincreasing
  std::vector<std::vector<Vec>> eigenfunctions;  // K_max x m x d0
  std::vector<std::vector<double>> scores;       // n x K_max
  std::vector<double> fve;                       // K_max
  std::vector<std::string> subject_ids;          // n
  bool rank_deficient = false;  // trailing eigenvalues below 1e-12 were clamped
  bool compositional = false;   // trajectories came from the square-root embedding

  int k_max() const { return static_cast<int>(eigenvalues.size()); }
  int n_subjects() const { return static_cast<int>(scores.size()); }
  int n_times() const { return static_cast<int>(grid.size()); }
};

/// Longitudinal counts over J categories, before smoothing/normalization.
struct CountPanel {
  std::string subject_id;
  std::vector<double> times;
  std::vector<Vec> counts;  // m x J, rows nonnegative with positive sums
};

/// Rows on the simplex: nonnegative, summing to one.
struct CompositionCurve {
  std::string subject_id;
  std::vector<double> times;
  std::vector<Vec> proportions;  // m x J
};

struct SimConfig {
  ManifoldSpec manifold = make_sphere(2);
  int n = 100;
  int m = 20;
  int n_components = 20;
  double decay_base = 0.07;
  std::uint64_t seed = 0;
};

inline std::vector<double> uniform_grid(int m) {
  if (m < 2) fail(ErrorKind::GridMismatch, "grid needs at least 2 time points");
  std::vector<double> g(m);
  for (int j = 0; j < m; ++j) g[j] = static_cast<double>(j) / (m - 1);
  return g;
}

inline bool grids_equal(const std::vector<double>& a, const std::vector<double>& b,
                        double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (std::abs(a[j] - b[j]) > tol) return false;
  return true;
}

}  // namespace rfpca

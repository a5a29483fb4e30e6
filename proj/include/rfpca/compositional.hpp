#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rfpca/errors.hpp"
#include "rfpca/types.hpp"

namespace rfpca {

inline double epanechnikov(double u) {
  return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

/// Componentwise Nadaraya-Watson smoothing of the counts with the
/// Epanechnikov kernel, evaluated on eval_grid. Weights renormalize over
/// the observations inside the window; an empty window is an error.
inline CountPanel smooth_counts(const CountPanel& panel, double bandwidth,
                                const std::vector<double>& eval_grid) {
  if (bandwidth <= 0.0) fail(ErrorKind::DegenerateInput, "bandwidth must be positive");
  if (panel.times.empty() || panel.counts.size() != panel.times.size())
    fail(ErrorKind::DegenerateInput, "count panel rows do not match its times");
  for (const auto& row : panel.counts)
    if (row.size() != panel.counts.front().size())
      fail(ErrorKind::DimensionMismatch, "count rows have inconsistent category counts");
  double lo = panel.times.front(), hi = panel.times.front();
  for (double t : panel.times) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  const std::size_t nj = panel.counts.front().size();
  CountPanel out{panel.subject_id, eval_grid, {}};
  out.counts.reserve(eval_grid.size());
  for (double t : eval_grid) {
    if (t < lo - 1e-12 || t > hi + 1e-12)
      fail(ErrorKind::DegenerateInput, "evaluation time " + std::to_string(t) +
                                           " outside the observed range of subject " +
                                           panel.subject_id);
    Vec row(nj, 0.0);
    double den = 0.0;
    for (std::size_t i = 0; i < panel.times.size(); ++i) {
      const double w = epanechnikov((t - panel.times[i]) / bandwidth);
      if (w == 0.0) continue;
      den += w;
      for (std::size_t c = 0; c < nj; ++c) row[c] += w * panel.counts[i][c];
    }
    if (den == 0.0)
      fail(ErrorKind::EmptyKernelWindow,
           "no observation within bandwidth of t = " + std::to_string(t) + " for subject " +
               panel.subject_id);
    for (auto& e : row) e /= den;
    out.counts.push_back(std::move(row));
  }
  return out;
}

/// Row-normalizes counts onto the simplex.
inline CompositionCurve to_proportions(const CountPanel& panel) {
  CompositionCurve out{panel.subject_id, panel.times, {}};
  out.proportions.reserve(panel.counts.size());
  for (std::size_t i = 0; i < panel.counts.size(); ++i) {
    double sum = 0.0;
    for (double c : panel.counts[i]) {
      if (c < 0.0)
        fail(ErrorKind::DegenerateInput, "negative count for subject " + panel.subject_id);
      sum += c;
    }
    if (sum <= 0.0)
      fail(ErrorKind::ZeroRowSum, "subject " + panel.subject_id + " has zero total count at t = " +
                                      std::to_string(panel.times[i]));
    Vec row(panel.counts[i].size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = panel.counts[i][c] / sum;
    out.proportions.push_back(std::move(row));
  }
  return out;
}

/// Componentwise square root, landing on the nonnegative orthant of
/// S^{J-1}. Zeros pose no problem. Observation times must be uniformly
/// spaced and are affinely rescaled onto the [0,1] grid the FPCA
/// pipeline expects.
inline TrajectorySample sqrt_embed(const CompositionCurve& comp) {
  const std::size_t m = comp.times.size();
  if (m < 2) fail(ErrorKind::GridMismatch, "embedding needs at least 2 time points");
  if (comp.proportions.size() != m)
    fail(ErrorKind::GridMismatch, "proportion rows do not match the times");
  for (const auto& row : comp.proportions)
    if (row.size() != comp.proportions.front().size())
      fail(ErrorKind::DimensionMismatch, "proportion rows have inconsistent category counts");
  const double span = comp.times.back() - comp.times.front();
  if (span <= 0.0) fail(ErrorKind::GridMismatch, "times must be strictly increasing");
  const double step = span / static_cast<double>(m - 1);
  for (std::size_t j = 1; j < m; ++j)
    if (std::abs(comp.times[j] - comp.times[j - 1] - step) > 1e-9 * std::max(1.0, span))
      fail(ErrorKind::GridMismatch,
           "times are not uniformly spaced for subject " + comp.subject_id);
  TrajectorySample s{comp.subject_id, uniform_grid(static_cast<int>(m)), {}};
  s.points.reserve(m);
  for (const auto& row : comp.proportions) {
    Vec x(row.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] < 0.0)
        fail(ErrorKind::DegenerateInput,
             "proportions must be nonnegative for subject " + comp.subject_id);
      x[c] = std::sqrt(row[c]);
      sum += row[c];
    }
    if (std::abs(sum - 1.0) > 1e-9)
      fail(ErrorKind::DegenerateInput,
           "proportions must sum to one for subject " + comp.subject_id);
    s.points.push_back({std::move(x)});
  }
  return s;
}

/// Inverse of the embedding: componentwise square, with rows renormalized
/// to absorb rounding. Coordinates below -1e-6 mean the curve left the
/// orthant and are reported as an error; smaller negatives are clamped.
inline CompositionCurve sphere_to_composition(const TrajectorySample& sample) {
  CompositionCurve out{sample.subject_id, sample.grid, {}};
  out.proportions.reserve(sample.points.size());
  for (std::size_t j = 0; j < sample.points.size(); ++j) {
    const auto& x = sample.points[j].coords;
    Vec row(x.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (x[c] < -1e-6)
        fail(ErrorKind::NegativeCoordinate,
             "coordinate " + std::to_string(c) + " of subject " + sample.subject_id +
                 " at time index " + std::to_string(j) + " is " + std::to_string(x[c]));
      const double v = x[c] < 0.0 ? 0.0 : x[c];
      row[c] = v * v;
      sum += row[c];
    }
    if (sum <= 0.0)
      fail(ErrorKind::ZeroRowSum, "zero point cannot be squared onto the simplex");
    for (auto& e : row) e /= sum;
    out.proportions.push_back(std::move(row));
  }
  return out;
}

/// Lenient variant for reporting reconstructions: points that exited the
/// nonnegative orthant are flagged per time index instead of raising,
/// with negatives clamped before squaring.
inline CompositionCurve sphere_to_composition_flagged(const TrajectorySample& sample,
                                                      std::vector<bool>& in_orthant) {
  in_orthant.assign(sample.points.size(), true);
  CompositionCurve out{sample.subject_id, sample.grid, {}};
  out.proportions.reserve(sample.points.size());
  for (std::size_t j = 0; j < sample.points.size(); ++j) {
    const auto& x = sample.points[j].coords;
    Vec row(x.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (x[c] < -1e-6) in_orthant[j] = false;
      const double v = x[c] < 0.0 ? 0.0 : x[c];
      row[c] = v * v;
      sum += row[c];
    }
    if (sum <= 0.0)
      fail(ErrorKind::ZeroRowSum, "zero point cannot be squared onto the simplex");
    for (auto& e : row) e /= sum;
    out.proportions.push_back(std::move(row));
  }
  return out;
}

}  // namespace rfpca

#pragma once

#include <optional>
#include <vector>

#include "rfpca/errors.hpp"
#include "rfpca/fpca.hpp"
#include "rfpca/geo.hpp"
#include "rfpca/types.hpp"

namespace rfpca {

/// Classical multivariate L^2 FPCA on the ambient coordinates: Euclidean
/// centering, no tangency constraint, otherwise the same stacking,
/// scaling, and sign conventions as the intrinsic fit. Under the flat
/// geometry the Frechet mean curve reduces to the pointwise average, so
/// this reuses the full pipeline with the flat manifold plugged in.
inline RfpcaModel fit_l2_fpca(const std::vector<TrajectorySample>& samples, int K_max,
                              const FrechetConfig& config = {}) {
  if (samples.empty()) fail(ErrorKind::DegenerateInput, "fit needs at least 2 subjects");
  const auto spec = make_euclidean(static_cast<int>(samples.front().points.front().coords.size()));
  return fit_rfpca(spec, samples, config, K_max);
}

/// Geodesic FVE of an L^2 model: ambient reconstructions are projected
/// onto the manifold and compared under the geodesic metric. The
/// denominator U_0 is the geodesic variance about the intrinsic Frechet
/// mean curve (passed in, or recomputed here), so intrinsic and L^2 fits
/// share a single denominator.
inline FveResult geodesic_fve_l2(const ManifoldSpec& spec,
                                 const std::vector<TrajectorySample>& samples,
                                 const RfpcaModel& l2_model, int K,
                                 const std::optional<std::vector<Point>>& frechet_mean = std::nullopt,
                                 const FrechetConfig& config = {}) {
  if (l2_model.spec.kind != ManifoldKind::EuclideanAmbient)
    fail(ErrorKind::DimensionMismatch, "expected a model fitted by the L2 baseline");
  if (l2_model.spec.ambient_dim != spec.ambient_dim)
    fail(ErrorKind::DimensionMismatch, "L2 model dimension does not match the manifold");
  if (samples.size() != l2_model.scores.size())
    fail(ErrorKind::GridMismatch, "sample count does not match the fitted model");
  const std::vector<Point> mean =
      frechet_mean ? *frechet_mean : frechet_mean_curve(spec, samples, config);
  const std::size_t m = l2_model.grid.size();
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  FveResult r;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto rep = truncate_representation(l2_model, l2_model.scores[i], K);
    for (std::size_t j = 0; j < m; ++j) {
      const double w = inv_n * detail::fve_weight(j, m);
      const Point proj = project_to_manifold(spec, rep.curve[j].coords);
      const double d0 = geodesic_distance(spec, samples[i].points[j], mean[j]);
      const double dk = geodesic_distance(spec, samples[i].points[j], proj);
      r.u0 += w * d0 * d0;
      r.uk += w * dk * dk;
    }
  }
  if (r.u0 < 1e-15)
    fail(ErrorKind::ZeroVariance, "all curves coincide with the mean; FVE undefined");
  r.fve = (r.u0 - r.uk) / r.u0;
  return r;
}

/// Chart-based variant for S^2: FPCA on longitude/latitude coordinates
/// (radians), mapped back through the chart for the geodesic comparison.
inline RfpcaModel fit_l2_lonlat(const std::vector<TrajectorySample>& samples, int K_max,
                                const FrechetConfig& config = {}) {
  std::vector<TrajectorySample> charted;
  charted.reserve(samples.size());
  for (const auto& s : samples) {
    TrajectorySample c{s.subject_id, s.grid, {}};
    c.points.reserve(s.points.size());
    for (const auto& p : s.points) {
      const auto ll = s2_to_lonlat(p);
      const double deg = M_PI / 180.0;
      c.points.push_back({{ll[0] * deg, ll[1] * deg}});
    }
    charted.push_back(std::move(c));
  }
  return fit_l2_fpca(charted, K_max, config);
}

inline FveResult geodesic_fve_l2_lonlat(const ManifoldSpec& spec,
                                        const std::vector<TrajectorySample>& samples,
                                        const RfpcaModel& lonlat_model, int K,
                                        const std::optional<std::vector<Point>>& frechet_mean =
                                            std::nullopt,
                                        const FrechetConfig& config = {}) {
  if (spec.kind != ManifoldKind::Sphere || spec.ambient_dim != 3)
    fail(ErrorKind::DimensionMismatch, "the lon/lat chart applies to S^2 only");
  if (lonlat_model.spec.ambient_dim != 2)
    fail(ErrorKind::DimensionMismatch, "expected a 2-dimensional chart model");
  const std::vector<Point> mean =
      frechet_mean ? *frechet_mean : frechet_mean_curve(spec, samples, config);
  const std::size_t m = lonlat_model.grid.size();
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  FveResult r;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto rep = truncate_representation(lonlat_model, lonlat_model.scores[i], K);
    for (std::size_t j = 0; j < m; ++j) {
      const double w = inv_n * detail::fve_weight(j, m);
      const Point back = detail::lonlat_rad_to_s2(rep.curve[j].coords[0], rep.curve[j].coords[1]);
      const double d0 = geodesic_distance(spec, samples[i].points[j], mean[j]);
      const double dk = geodesic_distance(spec, samples[i].points[j], back);
      r.u0 += w * d0 * d0;
      r.uk += w * dk * dk;
    }
  }
  if (r.u0 < 1e-15)
    fail(ErrorKind::ZeroVariance, "all curves coincide with the mean; FVE undefined");
  r.fve = (r.u0 - r.uk) / r.u0;
  return r;
}

}  // namespace rfpca

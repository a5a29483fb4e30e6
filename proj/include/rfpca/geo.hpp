#pragma once

#include <array>
#include <cmath>
#include <string>

#include "rfpca/errors.hpp"
#include "rfpca/types.hpp"

namespace rfpca {

namespace detail {

inline Point lonlat_rad_to_s2(double lon, double lat) {
  return {{std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)}};
}

}  // namespace detail

/// Degrees of longitude/latitude to a unit vector on S^2.
inline Point lonlat_to_s2(double lon_deg, double lat_deg) {
  if (lat_deg < -90.0 || lat_deg > 90.0)
    fail(ErrorKind::LatitudeOutOfRange,
         "latitude " + std::to_string(lat_deg) + " outside [-90, 90]");
  const double deg = M_PI / 180.0;
  return detail::lonlat_rad_to_s2(lon_deg * deg, lat_deg * deg);
}

/// Inverse chart: longitude in (-180, 180], latitude in [-90, 90].
inline std::array<double, 2> s2_to_lonlat(const Point& p) {
  if (p.coords.size() != 3)
    fail(ErrorKind::DimensionMismatch, "lon/lat chart needs a point on S^2");
  const double rad = 180.0 / M_PI;
  const double lat = std::asin(vm::clamp_unit(p.coords[2]));
  const double lon = std::atan2(p.coords[1], p.coords[0]);
  return {lon * rad, lat * rad};
}

}  // namespace rfpca

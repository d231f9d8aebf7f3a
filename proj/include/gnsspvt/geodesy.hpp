#pragma once

#include <Eigen/Core>

#include "gnsspvt/errors.hpp"

namespace gnsspvt {

// WGS-84 defining parameters.
inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;
inline constexpr double kWgs84B = kWgs84A * (1.0 - kWgs84F);

struct GeodeticPos {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

// Bowring's iterative conversion, run to |delta lat| < 1e-12 rad. Points
// too close to the Earth's axis origin (under ~1 m from the center) have
// no meaningful geodetic latitude and throw DomainError.
GeodeticPos ecef_to_geodetic(const Eigen::Vector3d& ecef);

Eigen::Vector3d geodetic_to_ecef(const GeodeticPos& pos);

// Rows are the east, north, up unit vectors at `at`, so
// enu = enu_rotation(at) * d_ecef.
Eigen::Matrix3d enu_rotation(const GeodeticPos& at);

// East/north/up components of (est_ecef - ecef(truth)) in the tangent
// frame at `truth`.
Eigen::Vector3d ecef_error_to_enu(const GeodeticPos& truth,
                                  const Eigen::Vector3d& est_ecef);

// Vincenty's inverse formula on the WGS-84 ellipsoid: geodesic surface
// distance in meters. Iterates to |delta lambda| < 1e-12 with a 200
// iteration cap; nearly antipodal pairs do not converge and throw
// NonConvergenceError.
double vincenty_distance(const GeodeticPos& a, const GeodeticPos& b);

}  // namespace gnsspvt

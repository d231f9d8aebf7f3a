#include "gnsspvt/geodesy.hpp"

#include <cmath>

namespace gnsspvt {

namespace {
constexpr double kE2 = kWgs84F * (2.0 - kWgs84F);          // first eccentricity^2
constexpr double kEp2 = kE2 / (1.0 - kE2);                 // second eccentricity^2
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;
}  // namespace

GeodeticPos ecef_to_geodetic(const Eigen::Vector3d& ecef) {
  const double x = ecef.x(), y = ecef.y(), z = ecef.z();
  const double p = std::hypot(x, y);
  if (p + std::abs(z) < 1.0) {
    throw DomainError("ecef_to_geodetic: point too close to Earth's center");
  }
  const double lon = std::atan2(y, x);

  // Bowring: iterate on the parametric latitude until the geodetic
  // latitude settles below 1e-12 rad (2-3 passes in practice).
  double beta = std::atan2(z, (1.0 - kWgs84F) * p);
  double lat = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double next =
        std::atan2(z + kEp2 * kWgs84B * sb * sb * sb, p - kE2 * kWgs84A * cb * cb * cb);
    const double delta = std::abs(next - lat);
    lat = next;
    beta = std::atan((1.0 - kWgs84F) * std::tan(lat));
    if (delta < 1e-12 && i > 0) break;
  }

  const double slat = std::sin(lat);
  // h = p cos(lat) + z sin(lat) - a sqrt(1 - e^2 sin^2) is well behaved at
  // the poles where p/cos(lat) is not.
  const double alt =
      p * std::cos(lat) + z * slat - kWgs84A * std::sqrt(1.0 - kE2 * slat * slat);
  return {lat * kRadToDeg, lon * kRadToDeg, alt};
}

Eigen::Vector3d geodetic_to_ecef(const GeodeticPos& pos) {
  const double lat = pos.lat_deg * kDegToRad;
  const double lon = pos.lon_deg * kDegToRad;
  const double slat = std::sin(lat), clat = std::cos(lat);
  const double n = kWgs84A / std::sqrt(1.0 - kE2 * slat * slat);
  return {(n + pos.alt_m) * clat * std::cos(lon),
          (n + pos.alt_m) * clat * std::sin(lon),
          (n * (1.0 - kE2) + pos.alt_m) * slat};
}

Eigen::Matrix3d enu_rotation(const GeodeticPos& at) {
  const double lat = at.lat_deg * kDegToRad;
  const double lon = at.lon_deg * kDegToRad;
  const double sl = std::sin(lat), cl = std::cos(lat);
  const double so = std::sin(lon), co = std::cos(lon);
  Eigen::Matrix3d r;
  r << -so, co, 0.0,
       -sl * co, -sl * so, cl,
        cl * co, cl * so, sl;
  return r;
}

Eigen::Vector3d ecef_error_to_enu(const GeodeticPos& truth, const Eigen::Vector3d& est_ecef) {
  return enu_rotation(truth) * (est_ecef - geodetic_to_ecef(truth));
}

double vincenty_distance(const GeodeticPos& a, const GeodeticPos& b) {
  const double lat1 = a.lat_deg * kDegToRad, lat2 = b.lat_deg * kDegToRad;
  // Shortest signed arc, so date-line crossings don't read as antipodal.
  const double dlon = std::remainder((b.lon_deg - a.lon_deg) * kDegToRad, 2.0 * M_PI);

  const double u1 = std::atan((1.0 - kWgs84F) * std::tan(lat1));
  const double u2 = std::atan((1.0 - kWgs84F) * std::tan(lat2));
  const double su1 = std::sin(u1), cu1 = std::cos(u1);
  const double su2 = std::sin(u2), cu2 = std::cos(u2);

  double lambda = dlon;
  double sin_sigma = 0.0, cos_sigma = 0.0, sigma = 0.0;
  double cos_sq_alpha = 0.0, cos_2sm = 0.0;
  bool converged = false;
  for (int i = 0; i < 200; ++i) {
    const double sl = std::sin(lambda), cl = std::cos(lambda);
    sin_sigma = std::hypot(cu2 * sl, cu1 * su2 - su1 * cu2 * cl);
    if (sin_sigma == 0.0) return 0.0;  // coincident points
    cos_sigma = su1 * su2 + cu1 * cu2 * cl;
    sigma = std::atan2(sin_sigma, cos_sigma);
    const double sin_alpha = cu1 * cu2 * sl / sin_sigma;
    cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
    // Equatorial line: cos^2(alpha) = 0.
    cos_2sm = cos_sq_alpha != 0.0 ? cos_sigma - 2.0 * su1 * su2 / cos_sq_alpha : 0.0;
    const double c =
        kWgs84F / 16.0 * cos_sq_alpha * (4.0 + kWgs84F * (4.0 - 3.0 * cos_sq_alpha));
    const double prev = lambda;
    lambda = dlon + (1.0 - c) * kWgs84F * sin_alpha *
                        (sigma + c * sin_sigma *
                                     (cos_2sm + c * cos_sigma *
                                                    (-1.0 + 2.0 * cos_2sm * cos_2sm)));
    if (std::abs(lambda) > M_PI) {
      throw NonConvergenceError(
          "vincenty_distance: nearly antipodal points, inverse formula diverges");
    }
    if (std::abs(lambda - prev) < 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NonConvergenceError("vincenty_distance: no convergence after 200 iterations");
  }

  const double u_sq =
      cos_sq_alpha * (kWgs84A * kWgs84A - kWgs84B * kWgs84B) / (kWgs84B * kWgs84B);
  const double big_a =
      1.0 + u_sq / 16384.0 * (4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)));
  const double big_b = u_sq / 1024.0 * (256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)));
  const double delta_sigma =
      big_b * sin_sigma *
      (cos_2sm + big_b / 4.0 *
                     (cos_sigma * (-1.0 + 2.0 * cos_2sm * cos_2sm) -
                      big_b / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) *
                          (-3.0 + 4.0 * cos_2sm * cos_2sm)));
  return kWgs84B * big_a * (sigma - delta_sigma);
}

}  // namespace gnsspvt

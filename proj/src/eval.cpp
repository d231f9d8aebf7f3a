#include "gnsspvt/eval.hpp"

#include <algorithm>
#include <cmath>

namespace gnsspvt {

std::vector<std::pair<TimedGeodetic, GeodeticPos>> match_truth(
    std::span<const TimedGeodetic> solutions, std::span<const GroundTruthPoint> truth,
    std::size_t* dropped) {
  if (truth.empty()) throw DomainError("match_truth: empty ground truth");
  for (std::size_t i = 1; i < truth.size(); ++i) {
    if (truth[i].utc_millis < truth[i - 1].utc_millis) {
      throw DomainError("match_truth: ground truth not sorted by time");
    }
  }

  std::vector<std::pair<TimedGeodetic, GeodeticPos>> matched;
  std::size_t outside = 0;
  for (const TimedGeodetic& sol : solutions) {
    if (sol.utc_millis < truth.front().utc_millis ||
        sol.utc_millis > truth.back().utc_millis) {
      ++outside;
      continue;
    }
    // First truth point at or after the solution time.
    auto it = std::lower_bound(truth.begin(), truth.end(), sol.utc_millis,
                               [](const GroundTruthPoint& p, std::int64_t t) {
                                 return p.utc_millis < t;
                               });
    GeodeticPos interp;
    if (it->utc_millis == sol.utc_millis || it == truth.begin()) {
      interp = {it->lat_deg, it->lon_deg, it->alt_m};
    } else {
      const GroundTruthPoint& hi = *it;
      const GroundTruthPoint& lo = *(it - 1);
      const double span = static_cast<double>(hi.utc_millis - lo.utc_millis);
      // lower_bound guarantees lo < sol < hi strictly here, so span > 0.
      const double a = static_cast<double>(sol.utc_millis - lo.utc_millis) / span;
      interp = {lo.lat_deg + a * (hi.lat_deg - lo.lat_deg),
                lo.lon_deg + a * (hi.lon_deg - lo.lon_deg),
                lo.alt_m + a * (hi.alt_m - lo.alt_m)};
    }
    matched.emplace_back(sol, interp);
  }
  if (dropped) *dropped = outside;
  if (matched.empty()) {
    throw NoOverlapError("match_truth: solutions and ground truth share no time span");
  }
  return matched;
}

ErrorRecord make_error_record(const TimedGeodetic& solution, const GeodeticPos& truth,
                              const std::string& method) {
  ErrorRecord rec;
  rec.utc_millis = solution.utc_millis;
  rec.method = method;
  const Eigen::Vector3d enu = ecef_error_to_enu(truth, geodetic_to_ecef(solution.pos));
  rec.east_m = enu.x();
  rec.north_m = enu.y();
  rec.up_m = enu.z();
  // Horizontal error is the geodesic distance between the estimate moved
  // to truth altitude and the truth point.
  rec.horizontal_m = vincenty_distance(
      {solution.pos.lat_deg, solution.pos.lon_deg, truth.alt_m}, truth);
  rec.vertical_m = std::abs(enu.z());
  return rec;
}

double percentile(std::vector<double> values, double q, PercentileMethod method) {
  if (values.empty()) throw DomainError("percentile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("percentile: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  switch (method) {
    case PercentileMethod::kLinearInterpolation: {
      const double h = static_cast<double>(n - 1) * q;
      const std::size_t lo = static_cast<std::size_t>(std::floor(h));
      if (lo + 1 >= n) return values[n - 1];
      const double frac = h - static_cast<double>(lo);
      return values[lo] + frac * (values[lo + 1] - values[lo]);
    }
    case PercentileMethod::kNearestRank: {
      const double raw = std::ceil(q * static_cast<double>(n));
      const std::size_t rank = std::max<std::size_t>(1, static_cast<std::size_t>(raw));
      return values[std::min(rank, n) - 1];
    }
  }
  throw DomainError("percentile: unknown method");
}

double horizontal_score(std::span<const double> horizontal_errors, PercentileMethod method) {
  if (horizontal_errors.empty()) throw DomainError("horizontal_score: empty sample");
  std::vector<double> v(horizontal_errors.begin(), horizontal_errors.end());
  const double p50 = percentile(v, 0.50, method);
  const double p95 = percentile(v, 0.95, method);
  return 0.5 * (p50 + p95);
}

std::vector<std::pair<double, double>> ecdf(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(v.size());
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.emplace_back(v[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

}  // namespace gnsspvt

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnsspvt/geodesy.hpp"
#include "gnsspvt/ingest.hpp"

namespace gnsspvt {

struct ErrorRecord {
  std::int64_t utc_millis = 0;
  std::string method;
  double east_m = 0.0;
  double north_m = 0.0;
  double up_m = 0.0;
  double horizontal_m = 0.0;  // Vincenty surface distance
  double vertical_m = 0.0;    // |up|
};

struct TimedGeodetic {
  std::int64_t utc_millis = 0;
  GeodeticPos pos;
};

// Pairs each solution with linearly interpolated truth at its timestamp.
// Solutions outside the truth span are dropped (count reported through
// `dropped`). Throws NoOverlapError when nothing matches, DomainError on
// unsorted truth.
std::vector<std::pair<TimedGeodetic, GeodeticPos>> match_truth(
    std::span<const TimedGeodetic> solutions,
    std::span<const GroundTruthPoint> truth, std::size_t* dropped = nullptr);

// Error decomposition for one matched pair: ENU displacement in the truth
// tangent frame, horizontal via the geodesic distance.
ErrorRecord make_error_record(const TimedGeodetic& solution, const GeodeticPos& truth,
                              const std::string& method);

enum class PercentileMethod { kLinearInterpolation, kNearestRank };

// q in [0,1]. Linear interpolation follows the standard sample-quantile
// definition h = (n-1) q; nearest rank takes ceil(q n) with a floor of 1.
// Empty input throws DomainError.
double percentile(std::vector<double> values, double q,
                  PercentileMethod method = PercentileMethod::kLinearInterpolation);

// (P50 + P95) / 2 of the horizontal errors.
double horizontal_score(std::span<const double> horizontal_errors,
                        PercentileMethod method = PercentileMethod::kLinearInterpolation);

// Sorted (value, fraction <= value) knots; duplicates keep their own knot.
std::vector<std::pair<double, double>> ecdf(std::span<const double> values);

}  // namespace gnsspvt

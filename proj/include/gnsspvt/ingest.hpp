#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Core>

#include "gnsspvt/errors.hpp"

namespace gnsspvt {

// Numeric values follow the Android ConstellationType codes so parsed
// integers map directly.
enum class Constellation : int {
  kUnknown = 0,
  kGps = 1,
  kSbas = 2,
  kGlonass = 3,
  kQzss = 4,
  kBeidou = 5,
  kGalileo = 6,
};

Constellation constellation_from_android(int code);
Constellation constellation_from_label(const std::string& label);
std::string to_string(Constellation c);

// GnssClock/GnssMeasurement state bits we care about.
inline constexpr std::uint32_t kStateCodeLock = 0x1;
inline constexpr std::uint32_t kStateTowDecoded = 0x8;

// One row of a raw GNSS log: the receiver clock fields plus the
// per-satellite measurement fields needed to form a pseudorange and a
// pseudorange rate.
struct RawMeasurement {
  Constellation constellation = Constellation::kUnknown;
  int svid = 0;
  std::int64_t time_nanos = 0;
  double time_offset_nanos = 0.0;
  std::int64_t full_bias_nanos = 0;
  double bias_nanos = 0.0;
  std::int64_t received_sv_time_nanos = 0;
  std::int64_t received_sv_time_uncertainty_nanos = 0;
  double pseudorange_rate_mps = 0.0;
  double pseudorange_rate_uncertainty_mps = 0.0;
  std::uint32_t state = kStateCodeLock | kStateTowDecoded;
  double cn0_dbhz = 0.0;
};

// All measurements sharing one TimeNanos, i.e. one receiver epoch. The
// first-epoch bias pair is carried along because the receive-time
// convention freezes FullBiasNanos/BiasNanos at their first observed
// values to keep the clock offset estimable.
struct RawEpoch {
  std::int64_t utc_millis = 0;
  std::int64_t first_full_bias_nanos = 0;
  double first_bias_nanos = 0.0;
  std::vector<RawMeasurement> measurements;
};

// Per-satellite, per-epoch correction data: satellite state plus the
// additive terms that turn a raw pseudorange into a corrected one.
struct DerivedCorrection {
  std::int64_t utc_millis = 0;
  Constellation constellation = Constellation::kUnknown;
  int svid = 0;
  Eigen::Vector3d sat_pos_ecef = Eigen::Vector3d::Zero();
  Eigen::Vector3d sat_vel_ecef = Eigen::Vector3d::Zero();
  double sat_clock_bias_m = 0.0;
  double sat_clock_drift_mps = 0.0;
  double iono_delay_m = 0.0;
  double tropo_delay_m = 0.0;
  double inter_signal_bias_m = 0.0;
};

using DerivedKey = std::tuple<std::int64_t, Constellation, int>;

struct GroundTruthPoint {
  std::int64_t utc_millis = 0;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

struct ParseStats {
  std::size_t lines_total = 0;
  std::size_t records_parsed = 0;
  std::size_t records_skipped = 0;   // malformed or non-monotonic rows
  std::size_t duplicates = 0;        // later-row-wins replacements
};

struct GnssLog {
  std::vector<RawEpoch> epochs;
  ParseStats stats;
};

struct LogFilterOptions {
  // When true, rows whose state lacks the bits in state_mask are dropped.
  bool require_state = false;
  std::uint32_t state_mask = kStateTowDecoded | kStateCodeLock;
};

// Parses a GnssLogger-style text log. Column layout is discovered from the
// "# Raw," header line; "Raw," data rows are grouped into epochs by
// TimeNanos. Throws FormatError if no Raw header is present,
// EmptyInputError if no epoch survives.
GnssLog parse_gnss_log(std::istream& in, const LogFilterOptions& opts = {});

struct DerivedTable {
  std::map<DerivedKey, DerivedCorrection> by_key;
  ParseStats stats;
};

// Parses the correction CSV (header-driven). Duplicate keys: last row
// wins, counted in stats.duplicates.
DerivedTable parse_derived_csv(std::istream& in);

struct GroundTruth {
  std::vector<GroundTruthPoint> points;
  ParseStats stats;
};

// Parses the ground-truth CSV; output is sorted by time. Throws
// EmptyInputError when no usable row exists.
GroundTruth parse_ground_truth(std::istream& in);

}  // namespace gnsspvt

#pragma once

#include <cstdint>
#include <optional>

#include "gnsspvt/ingest.hpp"

namespace gnsspvt {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr std::int64_t kNanosPerWeek = 604800000000000LL;
inline constexpr std::int64_t kNanosPerDay = 86400000000000LL;

// System time offset from GPS time, subtracted from ReceivedSvTimeNanos to
// express the transmit time on the GPS scale.
inline constexpr std::int64_t kBeidouTimeOffsetNanos = 14000000000LL;

// Pseudoranges outside this window are physically implausible for MEO/GEO
// navigation signals and get flagged.
inline constexpr double kMinPlausibleRangeM = 1.5e7;
inline constexpr double kMaxPlausibleRangeM = 5.0e7;

// Receive/transmit times for one measurement, both reduced to time of
// week on the GPS scale, in nanoseconds.
struct TimePair {
  double receive_tow_nanos = 0.0;
  double transmit_tow_nanos = 0.0;
  std::int64_t week_number_nanos = 0;
};

// Nanoseconds from the GPS epoch to the start of the week containing the
// first fix. FullBiasNanos must be negative (receiver clock set after the
// GPS epoch); zero/positive values throw DomainError.
std::int64_t week_number_nanos(std::int64_t full_bias_nanos);

// Full GPS-referenced receive time in nanoseconds,
//   TimeNanos + TimeOffsetNanos - (FullBiasNanos(1) + BiasNanos(1)),
// computed in integer arithmetic (the bias magnitudes exceed 2^53, so a
// double round-trip would lose whole nanoseconds). The fractional part of
// the double-valued terms is rounded to the nearest nanosecond.
std::int64_t receive_time_nanos(std::int64_t time_nanos, double time_offset_nanos,
                                std::int64_t first_full_bias_nanos,
                                double first_bias_nanos);

// Receive time reduced to GPS time of week (nanoseconds, in [0, week)).
double receive_tow_nanos(const RawEpoch& epoch, const RawMeasurement& m);

struct TransmitTimeOptions {
  // GLONASS satellites timestamp in UTC(SU)+3h day time; aligning them to
  // GPS time of week needs the current leap-second count. Unset means
  // GLONASS measurements are rejected as unsupported.
  std::optional<double> glonass_leap_seconds;
  // Receive time of week used to place GLONASS day time inside the week.
  std::optional<double> receive_tow_hint_nanos;
};

// Transmit time of week on the GPS scale, from ReceivedSvTimeNanos minus
// the constellation system-time offset. GPS/QZSS/SBAS: zero offset;
// Galileo: zero (GST is steered to GPS within ns for this purpose);
// BeiDou: 14 s; GLONASS: needs options, otherwise
// UnsupportedConstellationError. Unknown constellations also throw.
double transmit_tow_nanos(const RawMeasurement& m,
                          const TransmitTimeOptions& opts = {});

struct PseudorangeResult {
  double meters = 0.0;
  bool plausible = true;
};

// rho = (t_rx - t_tx) * c, with week-rollover compensation: a difference
// below -half a week means the receive time rolled into the next week, one
// above +half a week means the transmit time did.
PseudorangeResult pseudorange_m(double receive_tow_nanos, double transmit_tow_nanos);

// Both time tags plus the week number for diagnostics.
TimePair time_pair(const RawEpoch& epoch, const RawMeasurement& m,
                   const TransmitTimeOptions& opts = {});

// Epoch timestamp: receive time mapped to UTC milliseconds (GPS-UTC leap
// offset left to the caller's truth data; logs and truth in this pipeline
// share the same scale). Rounded to the nearest millisecond in integer
// arithmetic.
std::int64_t utc_millis_from_receive(std::int64_t time_nanos, double time_offset_nanos,
                                     std::int64_t first_full_bias_nanos,
                                     double first_bias_nanos);

}  // namespace gnsspvt

#include "gnsspvt/rawmeas.hpp"

#include <cmath>

namespace gnsspvt {

std::int64_t week_number_nanos(std::int64_t full_bias_nanos) {
  if (full_bias_nanos >= 0) {
    throw DomainError("week_number_nanos: FullBiasNanos must be negative");
  }
  // floor(-FullBiasNanos / week) * week; the numerator is positive so
  // integer division is the floor.
  return (-full_bias_nanos / kNanosPerWeek) * kNanosPerWeek;
}

std::int64_t receive_time_nanos(std::int64_t time_nanos, double time_offset_nanos,
                                std::int64_t first_full_bias_nanos,
                                double first_bias_nanos) {
  // The bias magnitude (~1.3e18) exceeds 2^53, so the integer part must
  // never pass through a double.
  const std::int64_t integer_part = time_nanos - first_full_bias_nanos;
  const double fractional = time_offset_nanos - first_bias_nanos;
  return integer_part + static_cast<std::int64_t>(std::llround(fractional));
}

double receive_tow_nanos(const RawEpoch& epoch, const RawMeasurement& m) {
  const std::int64_t integer_part =
      (m.time_nanos - epoch.first_full_bias_nanos) -
      week_number_nanos(epoch.first_full_bias_nanos);
  // The reduced value sits far below 2^53, so the fractional clock terms
  // survive the conversion.
  return static_cast<double>(integer_part) +
         (m.time_offset_nanos - epoch.first_bias_nanos);
}

double transmit_tow_nanos(const RawMeasurement& m, const TransmitTimeOptions& opts) {
  switch (m.constellation) {
    case Constellation::kGps:
    case Constellation::kQzss:
    case Constellation::kSbas:
    case Constellation::kGalileo:
      // GST and the QZSS/SBAS scales track GPS time at the nanosecond
      // level relative to our error budget.
      return static_cast<double>(m.received_sv_time_nanos);
    case Constellation::kBeidou:
      return static_cast<double>(m.received_sv_time_nanos - kBeidouTimeOffsetNanos);
    case Constellation::kGlonass: {
      if (!opts.glonass_leap_seconds) {
        throw UnsupportedConstellationError(
            "transmit_tow_nanos: GLONASS requires a configured leap-second count");
      }
      if (!opts.receive_tow_hint_nanos) {
        throw DomainError(
            "transmit_tow_nanos: GLONASS day alignment needs the receive time of week");
      }
      // GLONASS timestamps are day time on UTC(SU)+3h; move to the GPS
      // scale and pick the week day closest to the receive time.
      const double tod_gps = static_cast<double>(m.received_sv_time_nanos) -
                             3.0 * 3600.0 * 1e9 + *opts.glonass_leap_seconds * 1e9;
      const double hint = *opts.receive_tow_hint_nanos;
      double day = std::floor(hint / static_cast<double>(kNanosPerDay));
      double tow = day * static_cast<double>(kNanosPerDay) + tod_gps;
      if (tow - hint > static_cast<double>(kNanosPerDay) / 2.0) {
        tow -= static_cast<double>(kNanosPerDay);
      } else if (hint - tow > static_cast<double>(kNanosPerDay) / 2.0) {
        tow += static_cast<double>(kNanosPerDay);
      }
      return tow;
    }
    default:
      throw UnsupportedConstellationError(
          "transmit_tow_nanos: unsupported constellation " + to_string(m.constellation));
  }
}

PseudorangeResult pseudorange_m(double receive_tow_nanos, double transmit_tow_nanos) {
  double delta = receive_tow_nanos - transmit_tow_nanos;
  // A transmit tag from the week before (or after) the receive tag shows
  // up as a near-week-sized difference.
  const double half_week = static_cast<double>(kNanosPerWeek) / 2.0;
  if (delta < -half_week) {
    delta += static_cast<double>(kNanosPerWeek);
  } else if (delta > half_week) {
    delta -= static_cast<double>(kNanosPerWeek);
  }
  PseudorangeResult result;
  result.meters = delta * 1e-9 * kSpeedOfLight;
  result.plausible = result.meters >= kMinPlausibleRangeM && result.meters <= kMaxPlausibleRangeM;
  return result;
}

TimePair time_pair(const RawEpoch& epoch, const RawMeasurement& m,
                   const TransmitTimeOptions& opts) {
  TimePair pair;
  pair.week_number_nanos = week_number_nanos(epoch.first_full_bias_nanos);
  pair.receive_tow_nanos = receive_tow_nanos(epoch, m);
  TransmitTimeOptions with_hint = opts;
  if (!with_hint.receive_tow_hint_nanos) {
    with_hint.receive_tow_hint_nanos = pair.receive_tow_nanos;
  }
  pair.transmit_tow_nanos = transmit_tow_nanos(m, with_hint);
  return pair;
}

std::int64_t utc_millis_from_receive(std::int64_t time_nanos, double time_offset_nanos,
                                     std::int64_t first_full_bias_nanos,
                                     double first_bias_nanos) {
  const std::int64_t full = receive_time_nanos(time_nanos, time_offset_nanos,
                                               first_full_bias_nanos, first_bias_nanos);
  // Round-to-nearest in integer arithmetic; receive times are positive.
  return (full + 500000) / 1000000;
}

}  // namespace gnsspvt

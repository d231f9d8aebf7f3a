#include "gnsspvt/measurements.hpp"

#include <algorithm>
#include <set>

namespace gnsspvt {

std::pair<double, double> correct(double rho_m, double rho_dot_mps,
                                  const DerivedCorrection& corr) {
  const double rho_c = rho_m + corr.sat_clock_bias_m - corr.iono_delay_m -
                       corr.tropo_delay_m - corr.inter_signal_bias_m;
  const double rho_dot_c = rho_dot_mps + corr.sat_clock_drift_mps;
  return {rho_c, rho_dot_c};
}

std::pair<double, double> sigma_from_raw(const RawMeasurement& m,
                                         const UncertaintyFloors& floors) {
  const double sigma_rho =
      static_cast<double>(m.received_sv_time_uncertainty_nanos) * 1e-9 * kSpeedOfLight;
  return {std::max(sigma_rho, floors.sigma_rho_m),
          std::max(m.pseudorange_rate_uncertainty_mps, floors.sigma_rho_dot_mps)};
}

std::vector<EpochBatch> build_epochs(const std::vector<RawEpoch>& epochs,
                                     const std::map<DerivedKey, DerivedCorrection>& corrections,
                                     const EpochBuildOptions& opts, EpochBuildStats* stats) {
  EpochBuildStats local;
  std::vector<EpochBatch> out;
  out.reserve(epochs.size());

  std::optional<std::int64_t> prev_utc;
  for (const RawEpoch& raw : epochs) {
    EpochBatch batch;
    batch.utc_millis = raw.utc_millis;
    std::set<std::pair<Constellation, int>> seen;

    for (const RawMeasurement& m : raw.measurements) {
      ++local.measurements_total;
      if (!opts.allowlist.empty() &&
          std::find(opts.allowlist.begin(), opts.allowlist.end(), m.constellation) ==
              opts.allowlist.end()) {
        ++local.filtered;
        continue;
      }
      if (!seen.insert({m.constellation, m.svid}).second) {
        ++local.duplicates;
        continue;
      }

      TimePair times;
      try {
        times = time_pair(raw, m, opts.transmit);
      } catch (const UnsupportedConstellationError&) {
        ++local.unsupported;
        continue;
      }

      const PseudorangeResult rho = pseudorange_m(times.receive_tow_nanos,
                                                  times.transmit_tow_nanos);
      if (!rho.plausible) {
        ++local.implausible;
        continue;
      }

      auto it = corrections.find({raw.utc_millis, m.constellation, m.svid});
      if (it == corrections.end()) {
        ++local.missing_correction;
        continue;
      }
      const DerivedCorrection& corr = it->second;

      CorrectedMeasurement cm;
      cm.constellation = m.constellation;
      cm.svid = m.svid;
      std::tie(cm.rho_c_m, cm.rho_dot_c_mps) = correct(rho.meters, m.pseudorange_rate_mps, corr);
      std::tie(cm.sigma_rho_m, cm.sigma_rho_dot_mps) = sigma_from_raw(m, opts.floors);
      cm.sat_pos_ecef = corr.sat_pos_ecef;
      cm.sat_vel_ecef = corr.sat_vel_ecef;
      batch.measurements.push_back(std::move(cm));
    }

    if (batch.measurements.empty()) continue;
    if (prev_utc) {
      batch.sample_period_s = static_cast<double>(batch.utc_millis - *prev_utc) / 1000.0;
    }
    prev_utc = batch.utc_millis;
    out.push_back(std::move(batch));
  }

  if (stats) *stats = local;
  return out;
}

}  // namespace gnsspvt

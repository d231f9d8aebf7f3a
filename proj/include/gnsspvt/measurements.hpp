#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gnsspvt/ingest.hpp"
#include "gnsspvt/rawmeas.hpp"

namespace gnsspvt {

// A pseudorange/pseudorange-rate pair after corrections, with the
// satellite state it was formed against and 1-sigma uncertainties.
struct CorrectedMeasurement {
  Constellation constellation = Constellation::kUnknown;
  int svid = 0;
  double rho_c_m = 0.0;
  double rho_dot_c_mps = 0.0;
  double sigma_rho_m = 0.0;
  double sigma_rho_dot_mps = 0.0;
  Eigen::Vector3d sat_pos_ecef = Eigen::Vector3d::Zero();
  Eigen::Vector3d sat_vel_ecef = Eigen::Vector3d::Zero();
};

// One solvable epoch. sample_period_s is the gap to the previous epoch in
// the record (0 for the first), which the dynamics model consumes as T_s.
struct EpochBatch {
  std::int64_t utc_millis = 0;
  double sample_period_s = 0.0;
  std::vector<CorrectedMeasurement> measurements;
};

// rho_c = rho + B - I - T - S; the rate gets the clock-drift term only:
// rho_dot_c = rho_dot + D.
std::pair<double, double> correct(double rho_m, double rho_dot_mps,
                                  const DerivedCorrection& corr);

struct UncertaintyFloors {
  double sigma_rho_m = 0.1;
  double sigma_rho_dot_mps = 0.01;
};

// sigma_rho from ReceivedSvTimeUncertaintyNanos (scaled by c), sigma_rho_dot
// straight from the rate uncertainty field; both floored.
std::pair<double, double> sigma_from_raw(const RawMeasurement& m,
                                         const UncertaintyFloors& floors = {});

struct EpochBuildOptions {
  UncertaintyFloors floors;
  TransmitTimeOptions transmit;
  // Empty allowlist admits every supported constellation.
  std::vector<Constellation> allowlist;
};

struct EpochBuildStats {
  std::size_t measurements_total = 0;
  std::size_t missing_correction = 0;
  std::size_t implausible = 0;
  std::size_t unsupported = 0;
  std::size_t filtered = 0;   // allowlist rejections
  std::size_t duplicates = 0; // same (constellation, svid) twice in an epoch
};

// Full raw-to-corrected conversion: pseudoranges from the time tags,
// corrections joined by (utc_millis, constellation, svid), implausible or
// uncorrectable measurements dropped per-measurement. Epochs left with no
// measurement are dropped entirely but never raise.
std::vector<EpochBatch> build_epochs(
    const std::vector<RawEpoch>& epochs,
    const std::map<DerivedKey, DerivedCorrection>& corrections,
    const EpochBuildOptions& opts = {}, EpochBuildStats* stats = nullptr);

}  // namespace gnsspvt

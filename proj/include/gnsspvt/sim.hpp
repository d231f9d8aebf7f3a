#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gnsspvt/geodesy.hpp"
#include "gnsspvt/measurements.hpp"
#include "gnsspvt/wls.hpp"

namespace gnsspvt {

enum class TrajectoryKind { kStatic, kConstantVelocity, kWaypoint };

enum class FaultKind {
  kGap,             // magnitude: dead time in seconds inserted before the epoch
  kPseudorangeJump, // magnitude: persistent receiver-clock step in meters
  kSatelliteDrop,   // magnitude: number of consecutive epochs left with 3 sats
};

struct FaultSpec {
  std::size_t epoch_index = 0;
  FaultKind kind = FaultKind::kGap;
  double magnitude = 0.0;
};

struct Waypoint {
  double t_s = 0.0;
  GeodeticPos pos;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  double duration_s = 60.0;
  double rate_hz = 1.0;

  TrajectoryKind trajectory = TrajectoryKind::kStatic;
  GeodeticPos start{1.3521, 103.8198, 50.0};
  Eigen::Vector3d velocity_enu_mps = Eigen::Vector3d::Zero();
  std::vector<Waypoint> waypoints;

  int satellite_count = 8;
  double shell_radius_m = 2.66e7;
  double elevation_mask_deg = 5.0;
  double drift_deg_s = 0.01;

  double sigma_rho_m = 10.0;
  double sigma_rho_dot_mps = 0.5;

  double clock_offset_m = 100.0;   // initial receiver clock offset
  double clock_drift_mps = 1.0;    // initial receiver clock drift
  double clock_s_t = 0.01;         // phase random-walk density, m^2/s
  double clock_s_f = 1e-4;         // frequency random-walk density, (m/s)^2/s

  std::vector<FaultSpec> faults;
};

// JSON round-trip for scenario files. Unknown keys are rejected to catch
// typos; every key has a default so a minimal file works.
ScenarioConfig scenario_from_json(std::istream& in);
std::string scenario_to_json(const ScenarioConfig& config);

// Everything one scenario produces. `epochs` is the direct path (already
// corrected batches); `raw_epochs` + `corrections` is the raw path that
// must reproduce it bit-for-bit through ingest/rawmeas/measurements.
struct Scenario {
  std::vector<std::int64_t> utc_millis;
  std::vector<StateVector> truth;          // interleaved state per epoch
  std::vector<EpochBatch> epochs;
  std::vector<RawEpoch> raw_epochs;
  std::map<DerivedKey, DerivedCorrection> corrections;
  std::vector<GroundTruthPoint> ground_truth;
};

// Deterministic forward model: same config, same bytes. Satellites are
// placed on a sphere of shell_radius_m above the elevation mask and drift
// slowly in azimuth; measurement noise is white Gaussian from a seeded
// generator. Transmit times are quantized to integer nanoseconds for the
// raw path and the residual is folded into the emitted satellite clock
// bias, so both paths agree to double precision.
Scenario generate_scenario(const ScenarioConfig& config);

// Text emitters matching the ingest parsers.
void write_gnss_log(std::ostream& out, const std::vector<RawEpoch>& epochs);
void write_derived_csv(std::ostream& out,
                       const std::map<DerivedKey, DerivedCorrection>& corrections);
void write_ground_truth_csv(std::ostream& out,
                            const std::vector<GroundTruthPoint>& points);

}  // namespace gnsspvt

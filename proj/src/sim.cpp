#include "gnsspvt/sim.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include <json.hpp>

#include "gnsspvt/geodesy.hpp"
#include "gnsspvt/pipeline.hpp"

namespace gnsspvt {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

// GPS week 2148, 4 days in: mid-week so typical scenario lengths never
// cross a week boundary, yet the rollover arithmetic still gets exercised
// by dedicated tests.
constexpr std::int64_t kStartWeek = 2148;
constexpr std::int64_t kStartTowNanos = 345600LL * 1000000000LL;
constexpr std::int64_t kBootOffsetNanos = 6000000000LL;  // hw clock at first epoch

// Deterministic draws: mt19937_64 has a standard-specified sequence, and
// the Gaussian transform is pinned here rather than left to the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return std::ldexp(static_cast<double>(engine_() >> 11), -53);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {  // Box-Muller, cached spare
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct SatParams {
  double az0_deg = 0.0;
  double el0_deg = 0.0;
  double iono_m = 0.0;
  double tropo_m = 0.0;
  double isrb_m = 0.0;
  double clock_bias_m = 0.0;
  double clock_drift_mps = 0.0;
};

void validate(const ScenarioConfig& c) {
  if (c.satellite_count < 4) throw DomainError("scenario: satellite_count must be >= 4");
  if (!(c.duration_s > 0.0)) throw DomainError("scenario: duration_s must be positive");
  if (!(c.rate_hz > 0.0)) throw DomainError("scenario: rate_hz must be positive");
  if (c.shell_radius_m <= kWgs84A) {
    throw DomainError("scenario: shell_radius_m must exceed the Earth radius");
  }
  if (c.elevation_mask_deg >= 85.0 || c.elevation_mask_deg < 0.0) {
    throw DomainError("scenario: elevation_mask_deg must lie in [0, 85)");
  }
  if (c.sigma_rho_m < 0.0 || c.sigma_rho_dot_mps < 0.0) {
    throw DomainError("scenario: noise sigmas must be non-negative");
  }
  if (c.clock_s_t < 0.0 || c.clock_s_f < 0.0) {
    throw DomainError("scenario: clock densities must be non-negative");
  }
  if (c.trajectory == TrajectoryKind::kWaypoint && c.waypoints.size() < 2) {
    throw DomainError("scenario: waypoint trajectory needs at least 2 waypoints");
  }
  for (std::size_t i = 1; i < c.waypoints.size(); ++i) {
    if (c.waypoints[i].t_s <= c.waypoints[i - 1].t_s) {
      throw DomainError("scenario: waypoint times must be strictly increasing");
    }
  }
  for (const FaultSpec& f : c.faults) {
    if (f.magnitude < 0.0) throw DomainError("scenario: fault magnitude must be non-negative");
  }
}

class Trajectory {
 public:
  explicit Trajectory(const ScenarioConfig& c) : config_(c) {
    start_ecef_ = geodetic_to_ecef(c.start);
    vel_ecef_ = enu_rotation(c.start).transpose() * c.velocity_enu_mps;
    for (const Waypoint& w : c.waypoints) {
      times_.push_back(w.t_s);
      points_.push_back(geodetic_to_ecef(w.pos));
    }
  }

  Eigen::Vector3d position(double t) const {
    switch (config_.trajectory) {
      case TrajectoryKind::kStatic:
        return start_ecef_;
      case TrajectoryKind::kConstantVelocity:
        return start_ecef_ + vel_ecef_ * t;
      case TrajectoryKind::kWaypoint: {
        if (t <= times_.front()) return points_.front();
        if (t >= times_.back()) return points_.back();
        std::size_t hi = 1;
        while (times_[hi] < t) ++hi;
        const double a = (t - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
        return points_[hi - 1] + a * (points_[hi] - points_[hi - 1]);
      }
    }
    throw DomainError("scenario: unknown trajectory kind");
  }

  Eigen::Vector3d velocity(double t) const {
    switch (config_.trajectory) {
      case TrajectoryKind::kStatic:
        return Eigen::Vector3d::Zero();
      case TrajectoryKind::kConstantVelocity:
        return vel_ecef_;
      case TrajectoryKind::kWaypoint: {
        if (t < times_.front() || t >= times_.back()) return Eigen::Vector3d::Zero();
        std::size_t hi = 1;
        while (times_[hi] < t) ++hi;
        if (times_[hi] == t && hi + 1 < times_.size()) ++hi;  // right derivative at knots
        return (points_[hi] - points_[hi - 1]) / (times_[hi] - times_[hi - 1]);
      }
    }
    throw DomainError("scenario: unknown trajectory kind");
  }

 private:
  const ScenarioConfig& config_;
  Eigen::Vector3d start_ecef_ = Eigen::Vector3d::Zero();
  Eigen::Vector3d vel_ecef_ = Eigen::Vector3d::Zero();
  std::vector<double> times_;
  std::vector<Eigen::Vector3d> points_;
};

// Satellite position for one scenario time: the sky direction (slow
// azimuth drift) anchored at the receiver's current location, pushed out
// to the orbital shell.
Eigen::Vector3d sat_position(const ScenarioConfig& c, const Trajectory& traj,
                             const SatParams& sat, double t) {
  const Eigen::Vector3d rx = traj.position(t);
  const GeodeticPos geo = ecef_to_geodetic(rx);
  const double az = (sat.az0_deg + c.drift_deg_s * t) * kDegToRad;
  const double el = sat.el0_deg * kDegToRad;
  const Eigen::Vector3d d_enu(std::cos(el) * std::sin(az), std::cos(el) * std::cos(az),
                              std::sin(el));
  const Eigen::Vector3d d = enu_rotation(geo).transpose() * d_enu;
  const double pd = rx.dot(d);
  const double s =
      -pd + std::sqrt(pd * pd + c.shell_radius_m * c.shell_radius_m - rx.squaredNorm());
  return rx + s * d;
}

Eigen::Vector3d sat_velocity(const ScenarioConfig& c, const Trajectory& traj,
                             const SatParams& sat, double t) {
  // Central difference; the measurement model consumes exactly this value,
  // so self-consistency matters more than the analytic derivative.
  const double h = 0.05;
  return (sat_position(c, traj, sat, t + h) - sat_position(c, traj, sat, t - h)) /
         (2.0 * h);
}

std::int64_t mod_week(std::int64_t nanos) {
  std::int64_t r = nanos % kNanosPerWeek;
  return r < 0 ? r + kNanosPerWeek : r;
}

TrajectoryKind trajectory_from_string(const std::string& s) {
  if (s == "static") return TrajectoryKind::kStatic;
  if (s == "constant-velocity") return TrajectoryKind::kConstantVelocity;
  if (s == "waypoint") return TrajectoryKind::kWaypoint;
  throw FormatError("scenario: unknown trajectory kind '" + s + "'");
}

std::string to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::kStatic: return "static";
    case TrajectoryKind::kConstantVelocity: return "constant-velocity";
    case TrajectoryKind::kWaypoint: return "waypoint";
  }
  return "?";
}

FaultKind fault_from_string(const std::string& s) {
  if (s == "gap") return FaultKind::kGap;
  if (s == "pr-jump") return FaultKind::kPseudorangeJump;
  if (s == "sat-drop") return FaultKind::kSatelliteDrop;
  throw FormatError("scenario: unknown fault kind '" + s + "'");
}

std::string to_string(FaultKind k) {
  switch (k) {
    case FaultKind::kGap: return "gap";
    case FaultKind::kPseudorangeJump: return "pr-jump";
    case FaultKind::kSatelliteDrop: return "sat-drop";
  }
  return "?";
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw FormatError("scenario: unknown key '" + item.key() + "' in " + where);
    }
  }
}

GeodeticPos pos_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"lat_deg", "lon_deg", "alt_m"}, where);
  GeodeticPos p;
  p.lat_deg = j.value("lat_deg", p.lat_deg);
  p.lon_deg = j.value("lon_deg", p.lon_deg);
  p.alt_m = j.value("alt_m", p.alt_m);
  return p;
}

}  // namespace

ScenarioConfig scenario_from_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("scenario: invalid JSON: ") + e.what());
  }
  ScenarioConfig c;
  reject_unknown(j, {"seed", "duration_s", "rate_hz", "trajectory", "constellation",
                     "noise", "clock", "faults"},
                 "scenario");
  c.seed = j.value("seed", c.seed);
  c.duration_s = j.value("duration_s", c.duration_s);
  c.rate_hz = j.value("rate_hz", c.rate_hz);

  if (j.contains("trajectory")) {
    const json& t = j["trajectory"];
    reject_unknown(t, {"kind", "start", "velocity_enu_mps", "waypoints"}, "trajectory");
    c.trajectory = trajectory_from_string(t.value("kind", "static"));
    if (t.contains("start")) c.start = pos_from_json(t["start"], "trajectory.start");
    if (t.contains("velocity_enu_mps")) {
      const auto v = t["velocity_enu_mps"].get<std::vector<double>>();
      if (v.size() != 3) throw FormatError("scenario: velocity_enu_mps needs 3 components");
      c.velocity_enu_mps = Eigen::Vector3d(v[0], v[1], v[2]);
    }
    if (t.contains("waypoints")) {
      for (const json& w : t["waypoints"]) {
        reject_unknown(w, {"t_s", "lat_deg", "lon_deg", "alt_m"}, "waypoint");
        Waypoint wp;
        wp.t_s = w.value("t_s", 0.0);
        wp.pos = {w.value("lat_deg", 0.0), w.value("lon_deg", 0.0), w.value("alt_m", 0.0)};
        c.waypoints.push_back(wp);
      }
    }
  }
  if (j.contains("constellation")) {
    const json& s = j["constellation"];
    reject_unknown(s, {"count", "shell_radius_m", "elevation_mask_deg", "drift_deg_s"},
                   "constellation");
    c.satellite_count = s.value("count", c.satellite_count);
    c.shell_radius_m = s.value("shell_radius_m", c.shell_radius_m);
    c.elevation_mask_deg = s.value("elevation_mask_deg", c.elevation_mask_deg);
    c.drift_deg_s = s.value("drift_deg_s", c.drift_deg_s);
  }
  if (j.contains("noise")) {
    const json& s = j["noise"];
    reject_unknown(s, {"sigma_rho_m", "sigma_rho_dot_mps"}, "noise");
    c.sigma_rho_m = s.value("sigma_rho_m", c.sigma_rho_m);
    c.sigma_rho_dot_mps = s.value("sigma_rho_dot_mps", c.sigma_rho_dot_mps);
  }
  if (j.contains("clock")) {
    const json& s = j["clock"];
    reject_unknown(s, {"offset_m", "drift_mps", "s_t", "s_f"}, "clock");
    c.clock_offset_m = s.value("offset_m", c.clock_offset_m);
    c.clock_drift_mps = s.value("drift_mps", c.clock_drift_mps);
    c.clock_s_t = s.value("s_t", c.clock_s_t);
    c.clock_s_f = s.value("s_f", c.clock_s_f);
  }
  if (j.contains("faults")) {
    for (const json& f : j["faults"]) {
      reject_unknown(f, {"epoch", "kind", "magnitude"}, "fault");
      FaultSpec spec;
      spec.epoch_index = f.value("epoch", 0u);
      spec.kind = fault_from_string(f.value("kind", "gap"));
      const double default_magnitude = spec.kind == FaultKind::kGap ? 11.0
                                       : spec.kind == FaultKind::kPseudorangeJump ? 60000.0
                                                                                  : 1.0;
      spec.magnitude = f.value("magnitude", default_magnitude);
      c.faults.push_back(spec);
    }
  }
  return c;
}

std::string scenario_to_json(const ScenarioConfig& c) {
  json t;
  t["kind"] = to_string(c.trajectory);
  json start;
  start["lat_deg"] = c.start.lat_deg;
  start["lon_deg"] = c.start.lon_deg;
  start["alt_m"] = c.start.alt_m;
  t["start"] = std::move(start);
  t["velocity_enu_mps"] = {c.velocity_enu_mps.x(), c.velocity_enu_mps.y(),
                           c.velocity_enu_mps.z()};
  json wps = json::array();
  for (const Waypoint& w : c.waypoints) {
    json wj;
    wj["t_s"] = w.t_s;
    wj["lat_deg"] = w.pos.lat_deg;
    wj["lon_deg"] = w.pos.lon_deg;
    wj["alt_m"] = w.pos.alt_m;
    wps.push_back(std::move(wj));
  }
  t["waypoints"] = wps;

  json faults = json::array();
  for (const FaultSpec& f : c.faults) {
    json fj;
    fj["epoch"] = f.epoch_index;
    fj["kind"] = to_string(f.kind);
    fj["magnitude"] = f.magnitude;
    faults.push_back(std::move(fj));
  }

  json j;
  j["seed"] = c.seed;
  j["duration_s"] = c.duration_s;
  j["rate_hz"] = c.rate_hz;
  j["trajectory"] = t;
  j["constellation"] = {{"count", c.satellite_count},
                        {"shell_radius_m", c.shell_radius_m},
                        {"elevation_mask_deg", c.elevation_mask_deg},
                        {"drift_deg_s", c.drift_deg_s}};
  j["noise"] = {{"sigma_rho_m", c.sigma_rho_m},
                {"sigma_rho_dot_mps", c.sigma_rho_dot_mps}};
  j["clock"] = {{"offset_m", c.clock_offset_m},
                {"drift_mps", c.clock_drift_mps},
                {"s_t", c.clock_s_t},
                {"s_f", c.clock_s_f}};
  j["faults"] = faults;
  return j.dump(2) + "\n";
}

Scenario generate_scenario(const ScenarioConfig& config) {
  validate(config);
  Rng rng(config.seed);
  Trajectory traj(config);

  // Draw order is part of the determinism contract:
  // 1) per satellite: azimuth, elevation, iono, tropo, inter-signal bias,
  //    clock bias, clock drift;
  // 2) per epoch k>0: clock phase and frequency process noise;
  // 3) per epoch, per emitted satellite: range noise, rate noise.
  std::vector<SatParams> sats(config.satellite_count);
  for (SatParams& s : sats) {
    s.az0_deg = rng.uniform(0.0, 360.0);
    s.el0_deg = rng.uniform(config.elevation_mask_deg, 85.0);
    s.iono_m = rng.uniform(1.0, 8.0);
    s.tropo_m = rng.uniform(1.0, 5.0);
    s.isrb_m = rng.uniform(0.0, 2.0);
    s.clock_bias_m = rng.uniform(-30000.0, 30000.0);
    s.clock_drift_mps = rng.uniform(-5.0, 5.0);
  }

  const std::size_t n_epochs =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.duration_s * config.rate_hz)));
  const double dt_nominal = 1.0 / config.rate_hz;

  // Scenario times with gap faults inserted as dead time before their
  // epoch; epochs are pinned to integer milliseconds.
  std::vector<std::int64_t> t_ms(n_epochs);
  {
    double t = 0.0;
    for (std::size_t k = 0; k < n_epochs; ++k) {
      if (k > 0) t += dt_nominal;
      for (const FaultSpec& f : config.faults) {
        if (f.kind == FaultKind::kGap && f.epoch_index == k) t += f.magnitude;
      }
      t_ms[k] = std::llround(t * 1000.0);
    }
  }

  // Which epochs drop to 3 satellites.
  std::vector<bool> dropped(n_epochs, false);
  for (const FaultSpec& f : config.faults) {
    if (f.kind != FaultKind::kSatelliteDrop) continue;
    const auto len = static_cast<std::size_t>(std::llround(std::max(1.0, f.magnitude)));
    for (std::size_t k = f.epoch_index; k < std::min(n_epochs, f.epoch_index + len); ++k) {
      dropped[k] = true;
    }
  }

  const std::int64_t start_full_nanos = kStartWeek * kNanosPerWeek + kStartTowNanos;
  const std::int64_t full_bias_nanos = kBootOffsetNanos - start_full_nanos;
  const std::int64_t start_utc_ms = start_full_nanos / 1000000;

  Scenario out;
  out.utc_millis.reserve(n_epochs);
  out.truth.reserve(n_epochs);
  out.epochs.reserve(n_epochs);
  out.raw_epochs.reserve(n_epochs);

  double clock_offset = config.clock_offset_m;
  double clock_drift = config.clock_drift_mps;

  for (std::size_t k = 0; k < n_epochs; ++k) {
    const double t = static_cast<double>(t_ms[k]) / 1000.0;
    if (k > 0) {
      const double dt = static_cast<double>(t_ms[k] - t_ms[k - 1]) / 1000.0;
      clock_offset += clock_drift * dt + std::sqrt(config.clock_s_t * dt) * rng.normal();
      clock_drift += std::sqrt(config.clock_s_f * dt) * rng.normal();
    }
    for (const FaultSpec& f : config.faults) {
      if (f.kind == FaultKind::kPseudorangeJump && f.epoch_index == k) {
        clock_offset += f.magnitude;
      }
    }

    const Eigen::Vector3d rx_pos = traj.position(t);
    const Eigen::Vector3d rx_vel = traj.velocity(t);
    const std::int64_t utc_ms = start_utc_ms + t_ms[k];
    const std::int64_t rx_full_nanos = start_full_nanos + t_ms[k] * 1000000;
    const std::int64_t rx_tow_nanos = mod_week(rx_full_nanos);

    StateVector truth = StateVector::Zero();
    set_state_position(truth, rx_pos);
    set_state_velocity(truth, rx_vel);
    truth[kIdxClockOffset] = clock_offset;
    truth[kIdxClockDrift] = clock_drift;

    RawEpoch raw;
    raw.utc_millis = utc_ms;
    raw.first_full_bias_nanos = full_bias_nanos;
    raw.first_bias_nanos = 0.0;

    EpochBatch batch;
    batch.utc_millis = utc_ms;
    if (k > 0) batch.sample_period_s = static_cast<double>(t_ms[k] - t_ms[k - 1]) / 1000.0;

    const int emitted =
        dropped[k] ? std::min(3, config.satellite_count) : config.satellite_count;
    for (int n = 0; n < emitted; ++n) {
      const SatParams& sp = sats[n];
      const Eigen::Vector3d sat_pos = sat_position(config, traj, sp, t);
      const Eigen::Vector3d sat_vel = sat_velocity(config, traj, sp, t);
      const double range = (rx_pos - sat_pos).norm();
      const Eigen::Vector3d los = (rx_pos - sat_pos) / range;
      const double range_rate = (rx_vel - sat_vel).dot(los);

      const double noise_rho = rng.normal() * config.sigma_rho_m;
      const double noise_rate = rng.normal() * config.sigma_rho_dot_mps;
      const double rho_c_ideal = range + clock_offset + noise_rho;
      const double rho_dot_c = range_rate + clock_drift + noise_rate;

      // Raw-path encoding: the transmit tag is quantized to integer
      // nanoseconds; the sub-ns residual is folded into the emitted
      // satellite clock bias so both paths reproduce rho_c exactly.
      const double rho_raw_ideal =
          rho_c_ideal - sp.clock_bias_m + sp.iono_m + sp.tropo_m + sp.isrb_m;
      const double ttx_ideal_nanos =
          static_cast<double>(rx_tow_nanos) - rho_raw_ideal / kSpeedOfLight * 1e9;
      std::int64_t rsv = std::llround(ttx_ideal_nanos);
      rsv = mod_week(rsv);
      const double rho_q =
          pseudorange_m(static_cast<double>(rx_tow_nanos), static_cast<double>(rsv)).meters;
      const double clock_bias_emit =
          rho_c_ideal + sp.iono_m + sp.tropo_m + sp.isrb_m - rho_q;

      const double sigma_rho = config.sigma_rho_m;
      const std::int64_t rsv_unc =
          std::llround(sigma_rho / kSpeedOfLight * 1e9);

      DerivedCorrection corr;
      corr.utc_millis = utc_ms;
      corr.constellation = Constellation::kGps;
      corr.svid = n + 1;
      corr.sat_pos_ecef = sat_pos;
      corr.sat_vel_ecef = sat_vel;
      corr.sat_clock_bias_m = clock_bias_emit;
      corr.sat_clock_drift_mps = sp.clock_drift_mps;
      corr.iono_delay_m = sp.iono_m;
      corr.tropo_delay_m = sp.tropo_m;
      corr.inter_signal_bias_m = sp.isrb_m;
      out.corrections.insert_or_assign(DerivedKey{utc_ms, corr.constellation, corr.svid},
                                       corr);

      RawMeasurement m;
      m.constellation = Constellation::kGps;
      m.svid = n + 1;
      m.time_nanos = kBootOffsetNanos + t_ms[k] * 1000000;
      m.time_offset_nanos = 0.0;
      m.full_bias_nanos = full_bias_nanos;
      m.bias_nanos = 0.0;
      m.received_sv_time_nanos = rsv;
      m.received_sv_time_uncertainty_nanos = rsv_unc;
      m.pseudorange_rate_mps = rho_dot_c - sp.clock_drift_mps;
      m.pseudorange_rate_uncertainty_mps = config.sigma_rho_dot_mps;
      m.state = kStateCodeLock | kStateTowDecoded;
      m.cn0_dbhz = 30.0 + static_cast<double>(m.svid % 15);
      raw.measurements.push_back(m);

      CorrectedMeasurement cm;
      cm.constellation = m.constellation;
      cm.svid = m.svid;
      std::tie(cm.rho_c_m, cm.rho_dot_c_mps) =
          correct(rho_q, m.pseudorange_rate_mps, corr);
      std::tie(cm.sigma_rho_m, cm.sigma_rho_dot_mps) = sigma_from_raw(m, {});
      cm.sat_pos_ecef = sat_pos;
      cm.sat_vel_ecef = sat_vel;
      batch.measurements.push_back(cm);
    }

    out.utc_millis.push_back(utc_ms);
    out.truth.push_back(truth);
    out.raw_epochs.push_back(std::move(raw));
    out.epochs.push_back(std::move(batch));
    out.ground_truth.push_back({utc_ms, 0.0, 0.0, 0.0});
    const GeodeticPos geo = ecef_to_geodetic(rx_pos);
    out.ground_truth.back().lat_deg = geo.lat_deg;
    out.ground_truth.back().lon_deg = geo.lon_deg;
    out.ground_truth.back().alt_m = geo.alt_m;
  }
  return out;
}

void write_gnss_log(std::ostream& out, const std::vector<RawEpoch>& epochs) {
  out << "# Raw,TimeNanos,FullBiasNanos,BiasNanos,TimeOffsetNanos,Svid,ConstellationType,"
         "State,ReceivedSvTimeNanos,ReceivedSvTimeUncertaintyNanos,Cn0DbHz,"
         "PseudorangeRateMetersPerSecond,PseudorangeRateUncertaintyMetersPerSecond\n";
  for (const RawEpoch& epoch : epochs) {
    for (const RawMeasurement& m : epoch.measurements) {
      out << "Raw," << m.time_nanos << ',' << m.full_bias_nanos << ','
          << format_double(m.bias_nanos) << ',' << format_double(m.time_offset_nanos) << ','
          << m.svid << ',' << static_cast<int>(m.constellation) << ',' << m.state << ','
          << m.received_sv_time_nanos << ',' << m.received_sv_time_uncertainty_nanos << ','
          << format_double(m.cn0_dbhz) << ',' << format_double(m.pseudorange_rate_mps)
          << ',' << format_double(m.pseudorange_rate_uncertainty_mps) << '\n';
    }
  }
}

void write_derived_csv(std::ostream& out,
                       const std::map<DerivedKey, DerivedCorrection>& corrections) {
  out << "utc_millis,constellation,svid,sat_pos_x_m,sat_pos_y_m,sat_pos_z_m,"
         "sat_vel_x_mps,sat_vel_y_mps,sat_vel_z_mps,sat_clock_bias_m,sat_clock_drift_mps,"
         "iono_delay_m,tropo_delay_m,inter_signal_bias_m\n";
  for (const auto& [key, c] : corrections) {
    out << c.utc_millis << ',' << to_string(c.constellation) << ',' << c.svid << ','
        << format_double(c.sat_pos_ecef.x()) << ',' << format_double(c.sat_pos_ecef.y())
        << ',' << format_double(c.sat_pos_ecef.z()) << ','
        << format_double(c.sat_vel_ecef.x()) << ',' << format_double(c.sat_vel_ecef.y())
        << ',' << format_double(c.sat_vel_ecef.z()) << ','
        << format_double(c.sat_clock_bias_m) << ',' << format_double(c.sat_clock_drift_mps)
        << ',' << format_double(c.iono_delay_m) << ',' << format_double(c.tropo_delay_m)
        << ',' << format_double(c.inter_signal_bias_m) << '\n';
  }
}

void write_ground_truth_csv(std::ostream& out, const std::vector<GroundTruthPoint>& points) {
  out << "utc_millis,lat_deg,lon_deg,alt_m\n";
  for (const GroundTruthPoint& p : points) {
    out << p.utc_millis << ',' << format_double(p.lat_deg) << ','
        << format_double(p.lon_deg) << ',' << format_double(p.alt_m) << '\n';
  }
}

}  // namespace gnsspvt

#include "gnsspvt/dynamics.hpp"

namespace gnsspvt {

Matrix8d state_transition(double ts_s) {
  if (!(ts_s > 0.0)) {
    throw DomainError("state_transition: sample period must be positive");
  }
  Matrix8d a = Matrix8d::Identity();
  for (int block = 0; block < 4; ++block) {
    a(2 * block, 2 * block + 1) = ts_s;
  }
  return a;
}

Matrix8d process_noise(double ts_s, const SpectralDensities& s) {
  if (!(ts_s > 0.0)) {
    throw DomainError("process_noise: sample period must be positive");
  }
  if (s.s_vx < 0.0 || s.s_vy < 0.0 || s.s_vz < 0.0 || s.s_t < 0.0 || s.s_f < 0.0) {
    throw DomainError("process_noise: spectral densities must be non-negative");
  }
  const double t = ts_s;
  const double t2 = t * t, t3 = t2 * t;
  Matrix8d q = Matrix8d::Zero();
  const double sv[3] = {s.s_vx, s.s_vy, s.s_vz};
  for (int axis = 0; axis < 3; ++axis) {
    const int i = 2 * axis;
    q(i, i) = sv[axis] * t3 / 3.0;
    q(i, i + 1) = sv[axis] * t2 / 2.0;
    q(i + 1, i) = q(i, i + 1);
    q(i + 1, i + 1) = sv[axis] * t;
  }
  // Clock block: phase noise integrates to S_t T on the offset variance;
  // frequency noise couples in like a velocity density.
  q(kIdxClockOffset, kIdxClockOffset) = s.s_t * t + s.s_f * t3 / 3.0;
  q(kIdxClockOffset, kIdxClockDrift) = s.s_f * t2 / 2.0;
  q(kIdxClockDrift, kIdxClockOffset) = q(kIdxClockOffset, kIdxClockDrift);
  q(kIdxClockDrift, kIdxClockDrift) = s.s_f * t;
  return q;
}

ProcessModel make_process_model(double ts_s, const SpectralDensities& s) {
  ProcessModel model;
  model.ts_s = ts_s;
  model.transition = state_transition(ts_s);
  model.noise = process_noise(ts_s, s);
  model.densities = s;
  return model;
}

SpectralDensities estimate_spectral_densities(const StateVector& post_prev,
                                              const StateVector& post_prev2,
                                              double ts_prev_s,
                                              const SpectralDensityFloors& floors) {
  if (!(ts_prev_s > 0.0)) {
    throw DomainError("estimate_spectral_densities: sample period must be positive");
  }
  SpectralDensities s;
  const double ax = (post_prev[kIdxVx] - post_prev2[kIdxVx]) / ts_prev_s;
  const double ay = (post_prev[kIdxVy] - post_prev2[kIdxVy]) / ts_prev_s;
  const double az = (post_prev[kIdxVz] - post_prev2[kIdxVz]) / ts_prev_s;
  s.s_vx = std::max(ax * ax, floors.s_v);
  s.s_vy = std::max(ay * ay, floors.s_v);
  s.s_vz = std::max(az * az, floors.s_v);

  // Clock phase residual against its own drift prediction, and the raw
  // drift increment.
  const double dt_rate =
      (post_prev[kIdxClockOffset] - post_prev2[kIdxClockOffset]) / ts_prev_s;
  const double phase_resid = dt_rate - post_prev[kIdxClockDrift];
  const double freq_rate =
      (post_prev[kIdxClockDrift] - post_prev2[kIdxClockDrift]) / ts_prev_s;
  s.s_t = std::max(phase_resid * phase_resid, floors.s_t);
  s.s_f = std::max(freq_rate * freq_rate, floors.s_f);
  return s;
}

Eigen::VectorXd measurement_noise_diag(const EpochBatch& epoch) {
  const std::size_t m = epoch.measurements.size();
  Eigen::VectorXd r(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& meas = epoch.measurements[i];
    r[2 * i] = meas.sigma_rho_m * meas.sigma_rho_m;
    r[2 * i + 1] = meas.sigma_rho_dot_mps * meas.sigma_rho_dot_mps;
  }
  return r;
}

MeasurementModel make_measurement_model(const StateVector& at, const EpochBatch& epoch) {
  MeasurementModel model;
  model.design = linearize(at, epoch).design;
  model.noise_diag = measurement_noise_diag(epoch);
  return model;
}

}  // namespace gnsspvt

#pragma once

#include <Eigen/Core>

#include "gnsspvt/wls.hpp"

namespace gnsspvt {

// Continuous-time white-noise spectral densities driving the
// constant-velocity + clock model: per-axis velocity noise, clock phase
// noise, clock frequency noise.
struct SpectralDensities {
  double s_vx = 0.0;  // (m/s^2)^2 / Hz equivalent
  double s_vy = 0.0;
  double s_vz = 0.0;
  double s_t = 0.0;   // m^2 / s
  double s_f = 0.0;   // (m/s)^2 / s
};

struct SpectralDensityFloors {
  double s_v = 0.01;
  double s_t = 1.0;
  double s_f = 0.01;
};

// Block-diagonal transition over T_s: four [1 T; 0 1] blocks in the
// interleaved state order. T_s must be positive.
Matrix8d state_transition(double ts_s);

// Van-Loan-style discrete noise for the same blocks: motion blocks
// [S T^3/3, S T^2/2; S T^2/2, S T], clock block with the phase density
// adding S_t T to the (0,0) entry. Negative densities throw DomainError.
Matrix8d process_noise(double ts_s, const SpectralDensities& s);

struct ProcessModel {
  double ts_s = 0.0;
  Matrix8d transition = Matrix8d::Identity();
  Matrix8d noise = Matrix8d::Zero();
  SpectralDensities densities;
};

ProcessModel make_process_model(double ts_s, const SpectralDensities& s);

// Adapts the densities from the two most recent posteriors: squared
// velocity increments per axis over the separating interval, and the
// clock-phase/frequency residuals against their own predictions. Floors
// keep the filter alive through stationary stretches.
SpectralDensities estimate_spectral_densities(const StateVector& post_prev,
                                              const StateVector& post_prev2,
                                              double ts_prev_s,
                                              const SpectralDensityFloors& floors = {});

// Measurement model for the filter: the linearized design matrix and the
// diagonal of R (variances, interleaved rho then rho-dot per satellite).
struct MeasurementModel {
  Eigen::MatrixXd design;
  Eigen::VectorXd noise_diag;
};

Eigen::VectorXd measurement_noise_diag(const EpochBatch& epoch);
MeasurementModel make_measurement_model(const StateVector& at, const EpochBatch& epoch);

}  // namespace gnsspvt

#include "gnsspvt/wls.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace gnsspvt {

Eigen::Vector3d state_position(const StateVector& x) {
  return {x[kIdxX], x[kIdxY], x[kIdxZ]};
}

Eigen::Vector3d state_velocity(const StateVector& x) {
  return {x[kIdxVx], x[kIdxVy], x[kIdxVz]};
}

void set_state_position(StateVector& x, const Eigen::Vector3d& p) {
  x[kIdxX] = p.x();
  x[kIdxY] = p.y();
  x[kIdxZ] = p.z();
}

void set_state_velocity(StateVector& x, const Eigen::Vector3d& v) {
  x[kIdxVx] = v.x();
  x[kIdxVy] = v.y();
  x[kIdxVz] = v.z();
}

bool plausible_state(const StateVector& x) {
  if (!x.allFinite()) return false;
  return state_position(x).norm() <= 5.0e7;
}

LinearizedSystem linearize(const StateVector& approx, const EpochBatch& epoch) {
  const std::size_t m = epoch.measurements.size();
  LinearizedSystem sys;
  sys.design = Eigen::MatrixXd::Zero(2 * m, 8);
  sys.residual = Eigen::VectorXd::Zero(2 * m);
  sys.weight = Eigen::VectorXd::Ones(2 * m);

  const Eigen::Vector3d pos = state_position(approx);
  const Eigen::Vector3d vel = state_velocity(approx);

  for (std::size_t i = 0; i < m; ++i) {
    const CorrectedMeasurement& meas = epoch.measurements[i];
    const Eigen::Vector3d d = pos - meas.sat_pos_ecef;
    const double range = d.norm();
    if (range < 1e-6) {
      throw SingularGeometryError(
          "linearize: linearization point coincides with a satellite");
    }
    const Eigen::Vector3d a = d / range;

    const std::size_t r0 = 2 * i;      // pseudorange row
    const std::size_t r1 = 2 * i + 1;  // pseudorange-rate row
    sys.design(r0, kIdxX) = a.x();
    sys.design(r0, kIdxY) = a.y();
    sys.design(r0, kIdxZ) = a.z();
    sys.design(r0, kIdxClockOffset) = 1.0;
    sys.design(r1, kIdxVx) = a.x();
    sys.design(r1, kIdxVy) = a.y();
    sys.design(r1, kIdxVz) = a.z();
    sys.design(r1, kIdxClockDrift) = 1.0;

    sys.residual[r0] = meas.rho_c_m - range - approx[kIdxClockOffset];
    sys.residual[r1] = meas.rho_dot_c_mps - (vel - meas.sat_vel_ecef).dot(a) -
                       approx[kIdxClockDrift];

    sys.weight[r0] = 1.0 / meas.sigma_rho_m;
    sys.weight[r1] = 1.0 / meas.sigma_rho_dot_mps;
  }
  return sys;
}

WlsSolution wls_solve(const EpochBatch& epoch, const StateVector& init,
                      const WlsOptions& opts) {
  if (epoch.measurements.size() < 4) {
    throw InsufficientSatellitesError("wls_solve: need at least 4 satellites, got " +
                                      std::to_string(epoch.measurements.size()));
  }

  WlsSolution sol;
  sol.state = init;

  double prev_step = std::numeric_limits<double>::infinity();
  int growth_streak = 0;

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    LinearizedSystem sys = linearize(sol.state, epoch);
    if (opts.unit_weights) sys.weight.setOnes();

    const Eigen::MatrixXd wg = sys.weight.asDiagonal() * sys.design;
    const Eigen::VectorXd wb = sys.weight.cwiseProduct(sys.residual);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(wg);
    cod.setThreshold(opts.rank_tolerance);
    if (cod.rank() < 8) {
      throw SingularGeometryError("wls_solve: design matrix rank " +
                                  std::to_string(cod.rank()) + " < 8");
    }
    const Eigen::Matrix<double, 8, 1> dx = cod.solve(wb);
    if (!dx.allFinite()) throw NumericalError("wls_solve: non-finite update");

    sol.state += dx;
    sol.diagnostics.iterations = iter;

    const double step = dx.norm();
    if (step > prev_step) {
      if (++growth_streak >= 3) {
        throw DivergenceError("wls_solve: update norm grew three consecutive iterations");
      }
    } else {
      growth_streak = 0;
    }
    prev_step = step;

    const double pos_step = std::sqrt(dx[kIdxX] * dx[kIdxX] + dx[kIdxY] * dx[kIdxY] +
                                      dx[kIdxZ] * dx[kIdxZ]);
    if (pos_step < opts.tol_m) break;
  }

  // Re-linearize at the final iterate for the covariance and residual
  // diagnostics (the loop's last system is one step stale).
  LinearizedSystem sys = linearize(sol.state, epoch);
  if (opts.unit_weights) sys.weight.setOnes();
  const Eigen::MatrixXd wg = sys.weight.asDiagonal() * sys.design;
  const Eigen::Matrix<double, 8, 8> normal = wg.transpose() * wg;
  sol.covariance = normal.ldlt().solve(Matrix8d::Identity());
  sol.diagnostics.weighted_residual_norm = sys.weight.cwiseProduct(sys.residual).norm();
  return sol;
}

double gdop(const EpochBatch& epoch, const Eigen::Vector3d& at) {
  const std::size_t m = epoch.measurements.size();
  if (m < 4) {
    throw InsufficientSatellitesError("gdop: need at least 4 satellites");
  }
  Eigen::MatrixXd h(m, 4);
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector3d d = at - epoch.measurements[i].sat_pos_ecef;
    const double range = d.norm();
    if (range < 1e-6) throw SingularGeometryError("gdop: point coincides with a satellite");
    h.row(i) << d.x() / range, d.y() / range, d.z() / range, 1.0;
  }
  const Eigen::Matrix4d normal = h.transpose() * h;
  const Eigen::Matrix4d cov = normal.inverse();
  if (!cov.allFinite()) throw SingularGeometryError("gdop: singular geometry");
  return std::sqrt(cov.trace());
}

}  // namespace gnsspvt

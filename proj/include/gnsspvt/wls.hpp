#pragma once

#include <Eigen/Core>

#include "gnsspvt/measurements.hpp"

namespace gnsspvt {

// Interleaved position/velocity/clock state:
//   [x, vx, y, vy, z, vz, clock offset (m), clock drift (m/s)].
using StateVector = Eigen::Matrix<double, 8, 1>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

enum StateIndex : int {
  kIdxX = 0,
  kIdxVx = 1,
  kIdxY = 2,
  kIdxVy = 3,
  kIdxZ = 4,
  kIdxVz = 5,
  kIdxClockOffset = 6,
  kIdxClockDrift = 7,
};

Eigen::Vector3d state_position(const StateVector& x);
Eigen::Vector3d state_velocity(const StateVector& x);
void set_state_position(StateVector& x, const Eigen::Vector3d& p);
void set_state_velocity(StateVector& x, const Eigen::Vector3d& v);

// A position is emittable only when finite and inside a generous Earth
// neighborhood.
bool plausible_state(const StateVector& x);

// First-order measurement model at `approx` for one epoch: 2M x 8 design
// matrix G (pseudorange row then rate row per satellite), residual vector
// b, and the diagonal of the weight matrix W (1/sigma). Throws
// SingularGeometryError when the linearization point coincides with a
// satellite.
struct LinearizedSystem {
  Eigen::MatrixXd design;    // G, 2M x 8
  Eigen::VectorXd residual;  // b, 2M
  Eigen::VectorXd weight;    // diag(W), 2M
};

LinearizedSystem linearize(const StateVector& approx, const EpochBatch& epoch);

struct WlsOptions {
  double tol_m = 1e-4;        // position-increment convergence threshold
  int max_iterations = 20;
  bool unit_weights = false;
  double rank_tolerance = 1e-10;
};

struct WlsDiagnostics {
  int iterations = 0;
  double weighted_residual_norm = 0.0;
};

struct WlsSolution {
  StateVector state = StateVector::Zero();
  Matrix8d covariance = Matrix8d::Zero();
  WlsDiagnostics diagnostics;
};

// Iteratively reweighted-free Gauss-Newton on the linearized system:
// solve W G dX = W b via a rank-revealing decomposition, update, repeat
// until the position increment drops under tol or the iteration cap.
// Throws InsufficientSatellitesError (M < 4), SingularGeometryError
// (rank < 8 at the working tolerance), DivergenceError (increment norm
// grows three consecutive iterations). Covariance is (G^T W^2 G)^-1 at
// the final iterate.
WlsSolution wls_solve(const EpochBatch& epoch,
                      const StateVector& init = StateVector::Zero(),
                      const WlsOptions& opts = {});

// Geometric dilution of precision of the position/clock geometry at `at`.
double gdop(const EpochBatch& epoch, const Eigen::Vector3d& at);

}  // namespace gnsspvt

#pragma once

#include <deque>
#include <span>
#include <vector>

#include "gnsspvt/dynamics.hpp"

namespace gnsspvt {

// One epoch of filter history. has_prior distinguishes epochs whose
// estimate came from a propagated prediction (EKF update/hold) from
// WLS-seeded ones; the smoother can only bridge epochs with intact
// priors.
struct FilterState {
  StateVector x_prior = StateVector::Zero();
  StateVector x_post = StateVector::Zero();
  Matrix8d p_prior = Matrix8d::Zero();
  Matrix8d p_post = Matrix8d::Zero();
  bool valid = false;
  bool has_prior = false;
};

// Default posterior covariance attached to a WLS seed: loose enough to let
// the first updates dominate.
Matrix8d default_seed_covariance();

struct EkfOptions {
  bool innovation_gating = false;
  double gate_threshold = 100.0;  // normalized innovation^2 per scalar row
};

// Predict with the process model, linearize at the prediction, and apply
// the measurement update in Joseph-free symmetric form
// P = P- - U S^-1 U^T with U = P- C^T. Throws NumericalError when the
// innovation covariance cannot be factorized and DivergenceError when the
// posterior goes non-finite.
FilterState ekf_step(const FilterState& prev, const ProcessModel& model,
                     const EpochBatch& epoch, const EkfOptions& opts = {});

// Prediction only: posterior := prior. Used while measurements are
// unusable but the outage is short enough to coast through.
FilterState ekf_hold(const FilterState& prev, const ProcessModel& model);

struct SmootherState {
  Matrix8d gain = Matrix8d::Zero();
  StateVector x_smooth = StateVector::Zero();
  Matrix8d p_smooth = Matrix8d::Zero();
};

// Fixed-interval smoothing over one contiguous forward pass. transitions
// has size states.size()-1; transitions[k] maps epoch k to k+1. Every
// state except the first must carry a propagated prior. Backward
// recursion: gain_k = P_k A^T (P-_{k+1})^-1, then the state and covariance
// corrections. Throws NumericalError on a non-invertible prior.
std::vector<SmootherState> rts_smooth(std::span<const FilterState> states,
                                      std::span<const Matrix8d> transitions);

// Sliding estimation window. Holds the last `capacity` epochs (N+1 in the
// usual parameterization); push evicts from the front.
class MheWindow {
 public:
  explicit MheWindow(std::size_t capacity) : capacity_(capacity) {}

  void push(EpochBatch epoch);
  void clear() { epochs_.clear(); }
  std::size_t size() const { return epochs_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return epochs_.size() == capacity_; }
  const std::deque<EpochBatch>& epochs() const { return epochs_; }

  // Total stacked measurement rows (2 per satellite per epoch).
  std::size_t stacked_rows() const;

 private:
  std::size_t capacity_;
  std::deque<EpochBatch> epochs_;
};

struct MheOptions {
  double tol_m = 1e-4;
  int max_iterations = 20;
  bool weighted = true;
  double rank_tolerance = 1e-10;
};

// Batch Gauss-Newton over the window: the decision variable is the state
// at the newest epoch; earlier linearization points are reached by
// inverse-transition chains, and each epoch contributes its linearized
// rows mapped through that chain. Same convergence/divergence contract as
// the single-epoch solver. Throws InsufficientSatellitesError when the
// stacked system has fewer than 8 rows.
StateVector mhe_solve(const MheWindow& window,
                      const StateVector& init = StateVector::Zero(),
                      const MheOptions& opts = {});

}  // namespace gnsspvt

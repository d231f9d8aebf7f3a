#include "gnsspvt/estimators.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace gnsspvt {

Matrix8d default_seed_covariance() {
  Matrix8d p = Matrix8d::Zero();
  p.diagonal() << 100.0 * 100.0, 10.0 * 10.0, 100.0 * 100.0, 10.0 * 10.0,
      100.0 * 100.0, 10.0 * 10.0, 1000.0 * 1000.0, 100.0 * 100.0;
  return p;
}

namespace {

Matrix8d symmetrize(const Matrix8d& p) { return 0.5 * (p + p.transpose()); }

}  // namespace

FilterState ekf_step(const FilterState& prev, const ProcessModel& model,
                     const EpochBatch& epoch, const EkfOptions& opts) {
  FilterState next;
  next.x_prior = model.transition * prev.x_post;
  next.p_prior =
      symmetrize(model.transition * prev.p_post * model.transition.transpose() + model.noise);
  next.has_prior = true;

  LinearizedSystem sys = linearize(next.x_prior, epoch);
  Eigen::VectorXd r = measurement_noise_diag(epoch);
  Eigen::MatrixXd c = sys.design;
  Eigen::VectorXd b = sys.residual;

  if (opts.innovation_gating) {
    // Per-row normalized innovation^2 against the prior; rows over the
    // gate are removed before the joint update.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      const double s = (c.row(i) * next.p_prior * c.row(i).transpose())(0, 0) + r[i];
      if (b[i] * b[i] / s <= opts.gate_threshold) keep.push_back(i);
    }
    if (static_cast<std::size_t>(keep.size()) < static_cast<std::size_t>(c.rows())) {
      Eigen::MatrixXd ck(keep.size(), c.cols());
      Eigen::VectorXd bk(keep.size()), rk(keep.size());
      for (std::size_t i = 0; i < keep.size(); ++i) {
        ck.row(i) = c.row(keep[i]);
        bk[i] = b[keep[i]];
        rk[i] = r[keep[i]];
      }
      c = std::move(ck);
      b = std::move(bk);
      r = std::move(rk);
    }
  }

  if (c.rows() == 0) {
    // Everything gated out: fall back to a pure prediction.
    next.x_post = next.x_prior;
    next.p_post = next.p_prior;
    next.valid = next.x_post.allFinite();
    return next;
  }

  // Innovation covariance and gain. The posterior covariance uses
  // P - U S^-1 U^T with U = P C^T, which equals (I - KC)P exactly but
  // stays symmetric under roundoff.
  const Eigen::MatrixXd u = next.p_prior * c.transpose();
  Eigen::MatrixXd s = c * u;
  s.diagonal() += r;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("ekf_step: innovation covariance factorization failed");
  }
  const Eigen::MatrixXd gain = ldlt.solve(u.transpose()).transpose();
  next.x_post = next.x_prior + gain * b;
  next.p_post = symmetrize(next.p_prior - u * ldlt.solve(u.transpose()));

  if (!next.x_post.allFinite() || !next.p_post.allFinite()) {
    throw DivergenceError("ekf_step: non-finite posterior");
  }
  next.valid = true;
  return next;
}

FilterState ekf_hold(const FilterState& prev, const ProcessModel& model) {
  FilterState next;
  next.x_prior = model.transition * prev.x_post;
  next.p_prior =
      symmetrize(model.transition * prev.p_post * model.transition.transpose() + model.noise);
  next.x_post = next.x_prior;
  next.p_post = next.p_prior;
  next.has_prior = true;
  next.valid = next.x_post.allFinite() && next.p_post.allFinite();
  if (!next.valid) throw DivergenceError("ekf_hold: non-finite prediction");
  return next;
}

std::vector<SmootherState> rts_smooth(std::span<const FilterState> states,
                                      std::span<const Matrix8d> transitions) {
  const std::size_t n = states.size();
  if (n == 0) return {};
  if (transitions.size() + 1 != n) {
    throw DomainError("rts_smooth: need exactly states.size()-1 transitions");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!states[k].has_prior) {
      throw DomainError("rts_smooth: interior state lacks a propagated prior");
    }
  }

  std::vector<SmootherState> out(n);
  out[n - 1].gain = Matrix8d::Identity();
  out[n - 1].x_smooth = states[n - 1].x_post;
  out[n - 1].p_smooth = states[n - 1].p_post;

  for (std::size_t idx = n - 1; idx-- > 0;) {
    const Matrix8d& a = transitions[idx];  // maps idx -> idx+1
    const FilterState& next = states[idx + 1];
    Eigen::LDLT<Matrix8d> ldlt(next.p_prior);
    if (ldlt.info() != Eigen::Success) {
      throw NumericalError("rts_smooth: prior covariance factorization failed");
    }
    // gain = P_k A^T (P-_{k+1})^-1, computed as the transpose of
    // (P-_{k+1})^-1 A P_k.
    const Matrix8d gain = ldlt.solve(a * states[idx].p_post).transpose();
    out[idx].gain = gain;
    out[idx].x_smooth =
        states[idx].x_post + gain * (out[idx + 1].x_smooth - next.x_prior);
    out[idx].p_smooth = symmetrize(
        states[idx].p_post +
        gain * (out[idx + 1].p_smooth - next.p_prior) * gain.transpose());
    if (!out[idx].x_smooth.allFinite()) {
      throw NumericalError("rts_smooth: non-finite smoothed state");
    }
  }
  return out;
}

void MheWindow::push(EpochBatch epoch) {
  epochs_.push_back(std::move(epoch));
  while (epochs_.size() > capacity_) epochs_.pop_front();
}

std::size_t MheWindow::stacked_rows() const {
  std::size_t rows = 0;
  for (const auto& e : epochs_) rows += 2 * e.measurements.size();
  return rows;
}

StateVector mhe_solve(const MheWindow& window, const StateVector& init,
                      const MheOptions& opts) {
  const auto& epochs = window.epochs();
  if (epochs.empty()) throw DomainError("mhe_solve: empty window");
  const std::size_t rows = window.stacked_rows();
  if (rows < 8) {
    throw InsufficientSatellitesError("mhe_solve: stacked system has " +
                                      std::to_string(rows) + " rows, need 8");
  }
  const std::size_t n = epochs.size();

  // chain[i] maps a perturbation of the newest state back to epoch i:
  // chain[n-1] = I, chain[i] = A_{i+1}^{-1} chain[i+1]. The inverse of a
  // [1 T; 0 1] block is the same block with -T, so the chains stay exact.
  std::vector<Matrix8d> chain(n);
  chain[n - 1] = Matrix8d::Identity();
  for (std::size_t i = n - 1; i-- > 0;) {
    const double ts = epochs[i + 1].sample_period_s;
    if (!(ts > 0.0)) {
      throw DomainError("mhe_solve: non-positive sample period inside window");
    }
    Matrix8d a_inv = Matrix8d::Identity();
    for (int block = 0; block < 4; ++block) a_inv(2 * block, 2 * block + 1) = -ts;
    chain[i] = a_inv * chain[i + 1];
  }

  StateVector x = init;
  double prev_step = std::numeric_limits<double>::infinity();
  int growth_streak = 0;

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    Eigen::MatrixXd big_m(rows, 8);
    Eigen::VectorXd big_y(rows);
    Eigen::VectorXd big_w(rows);

    // Newest epoch first, matching the backward chain construction.
    std::size_t row = 0;
    for (std::size_t i = n; i-- > 0;) {
      const StateVector xi = chain[i] * x;
      LinearizedSystem sys = linearize(xi, epochs[i]);
      const std::size_t mi = sys.design.rows();
      big_m.block(row, 0, mi, 8) = sys.design * chain[i];
      big_y.segment(row, mi) = sys.residual;
      big_w.segment(row, mi) = opts.weighted ? sys.weight : Eigen::VectorXd::Ones(mi);
      row += mi;
    }

    const Eigen::MatrixXd wm = big_w.asDiagonal() * big_m;
    const Eigen::VectorXd wy = big_w.cwiseProduct(big_y);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(wm);
    cod.setThreshold(opts.rank_tolerance);
    if (cod.rank() < 8) {
      throw SingularGeometryError("mhe_solve: stacked design matrix rank " +
                                  std::to_string(cod.rank()) + " < 8");
    }
    const Eigen::Matrix<double, 8, 1> dx = cod.solve(wy);
    if (!dx.allFinite()) throw NumericalError("mhe_solve: non-finite update");
    x += dx;

    const double step = dx.norm();
    if (step > prev_step) {
      if (++growth_streak >= 3) {
        throw DivergenceError("mhe_solve: update norm grew three consecutive iterations");
      }
    } else {
      growth_streak = 0;
    }
    prev_step = step;

    const double pos_step = std::sqrt(dx[kIdxX] * dx[kIdxX] + dx[kIdxY] * dx[kIdxY] +
                                      dx[kIdxZ] * dx[kIdxZ]);
    if (pos_step < opts.tol_m) break;
  }
  return x;
}

}  // namespace gnsspvt

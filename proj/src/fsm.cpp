#include "gnsspvt/fsm.hpp"

#include <cmath>

namespace gnsspvt {

DiscontinuityFlags detect_discontinuities(const EpochBatch* prev, const EpochBatch& current,
                                          const DiscontinuityThresholds& thresholds) {
  DiscontinuityFlags flags;
  flags.satellite =
      current.measurements.size() < static_cast<std::size_t>(thresholds.min_satellites);
  if (!prev) return flags;

  const double gap_s =
      static_cast<double>(current.utc_millis - prev->utc_millis) / 1000.0;
  flags.clock = gap_s > thresholds.clock_gap_s;

  // Largest corrected-pseudorange step across satellites common to both
  // epochs. No common satellite leaves continuity unobservable; treat it
  // as a jump.
  bool any_common = false;
  double max_jump = 0.0;
  for (const auto& cur_m : current.measurements) {
    for (const auto& prev_m : prev->measurements) {
      if (cur_m.constellation == prev_m.constellation && cur_m.svid == prev_m.svid) {
        any_common = true;
        max_jump = std::max(max_jump, std::abs(cur_m.rho_c_m - prev_m.rho_c_m));
        break;
      }
    }
  }
  flags.pseudorange = !any_common || max_jump > thresholds.pseudorange_jump_m;
  return flags;
}

std::string to_string(FsmLabel label) {
  switch (label) {
    case FsmLabel::kStop: return "stop";
    case FsmLabel::kWarmUp: return "warm-up";
    case FsmLabel::kRun: return "run";
    case FsmLabel::kHold: return "hold";
  }
  return "?";
}

std::string to_string(FsmAction action) {
  switch (action) {
    case FsmAction::kRunWls: return "run-wls";
    case FsmAction::kRunWlsFallback: return "run-wls-fallback";
    case FsmAction::kRunMhe: return "run-mhe";
    case FsmAction::kRunEkfUpdate: return "run-ekf-update";
    case FsmAction::kRunEkfHold: return "run-ekf-hold";
    case FsmAction::kRunRts: return "run-rts";
    case FsmAction::kEmitNone: return "emit-none";
    case FsmAction::kSegmentBoundary: return "segment-boundary";
  }
  return "?";
}

namespace {

FsmStep advance_wls(FsmState s, const DiscontinuityFlags& flags) {
  // The plain solver has no memory worth protecting: it only pauses while
  // the satellite count is too small.
  if (flags.satellite) {
    s.counter1 = 0;
    s.label = FsmLabel::kStop;
    return {s, FsmAction::kEmitNone};
  }
  s.counter1 += 1;
  s.label = FsmLabel::kRun;
  return {s, FsmAction::kRunWls};
}

FsmStep advance_mhe(FsmState s, const DiscontinuityFlags& flags) {
  if (flags.satellite) {
    // counter2 = 0 tells the runner the inverse-transition chain is broken;
    // the window restarts when estimation resumes.
    s.counter2 = 0;
    s.label = FsmLabel::kStop;
    return {s, FsmAction::kEmitNone};
  }
  if (flags.clock || flags.pseudorange) {
    // A discontinuity invalidates the inverse-transition chains: restart
    // the window from this epoch with a single-epoch solve.
    s.counter2 = 1;
    s.label = s.counter2 >= s.window_capacity ? FsmLabel::kRun : FsmLabel::kWarmUp;
    return {s, FsmAction::kRunWlsFallback};
  }
  s.counter2 += 1;
  s.label = s.counter2 >= s.window_capacity ? FsmLabel::kRun : FsmLabel::kWarmUp;
  return {s, FsmAction::kRunMhe};
}

FsmStep advance_ekf(FsmState s, const DiscontinuityFlags& flags) {
  s.flag1 = flags.clock || flags.pseudorange;
  switch (s.label) {
    case FsmLabel::kStop:
      if (flags.satellite) {
        return {s, FsmAction::kEmitNone};
      }
      s.counter0 = 0;
      s.counter1 = 1;
      s.label = FsmLabel::kWarmUp;
      return {s, FsmAction::kRunWls};
    case FsmLabel::kWarmUp:
      if (flags.satellite) {
        s.counter0 = 0;
        s.counter1 = 0;
        s.label = FsmLabel::kStop;
        return {s, FsmAction::kEmitNone};
      }
      if (s.flag1) {
        s.counter1 = 1;
        return {s, FsmAction::kRunWls};
      }
      s.counter1 += 1;
      if (s.counter1 <= s.warmup_epochs) {
        return {s, FsmAction::kRunWls};
      }
      s.label = FsmLabel::kRun;
      return {s, FsmAction::kRunEkfUpdate};
    case FsmLabel::kRun:
    case FsmLabel::kHold:
      if (flags.satellite) {
        s.counter0 += 1;
        if (s.counter0 > s.hold_threshold) {
          s.counter0 = 0;
          s.counter1 = 0;
          s.label = FsmLabel::kStop;
          return {s, FsmAction::kEmitNone};
        }
        s.label = FsmLabel::kHold;
        return {s, FsmAction::kRunEkfHold};
      }
      if (s.flag1) {
        // Clock or pseudorange discontinuity: the propagated prior is
        // meaningless, re-seed from scratch.
        s.counter0 = 0;
        s.counter1 = 1;
        s.label = FsmLabel::kWarmUp;
        return {s, FsmAction::kRunWls};
      }
      s.counter0 = 0;
      s.counter1 += 1;
      s.label = FsmLabel::kRun;
      return {s, FsmAction::kRunEkfUpdate};
  }
  throw DomainError("advance: invalid EKF machine label");
}

FsmStep advance_rts(FsmState s, const DiscontinuityFlags& flags) {
  // Backward scan over the forward pass: flags.satellite marks an empty
  // forward estimate, flag2 a discontinuity at the following epoch.
  s.flag2 = flags.clock || flags.pseudorange;
  if (flags.satellite) {
    s.counter3 = 0;
    s.label = FsmLabel::kStop;
    return {s, FsmAction::kEmitNone};
  }
  if (s.flag2) {
    s.counter3 = 1;
    s.label = FsmLabel::kRun;
    return {s, FsmAction::kSegmentBoundary};
  }
  s.counter3 += 1;
  s.label = FsmLabel::kRun;
  return {s, FsmAction::kRunRts};
}

}  // namespace

FsmStep advance(const FsmState& fsm, const DiscontinuityFlags& flags) {
  switch (fsm.kind) {
    case MachineKind::kWls: return advance_wls(fsm, flags);
    case MachineKind::kMhe: return advance_mhe(fsm, flags);
    case MachineKind::kEkf: return advance_ekf(fsm, flags);
    case MachineKind::kRts: return advance_rts(fsm, flags);
  }
  throw DomainError("advance: unknown machine kind");
}

}  // namespace gnsspvt

#pragma once

#include <string>

#include "gnsspvt/measurements.hpp"

namespace gnsspvt {

// Per-epoch discontinuity classification.
struct DiscontinuityFlags {
  bool satellite = false;     // fewer usable satellites than unknowns need
  bool clock = false;         // receiver time gap above threshold
  bool pseudorange = false;   // common-satellite range jump above threshold
};

struct DiscontinuityThresholds {
  double clock_gap_s = 10.0;
  double pseudorange_jump_m = 50000.0;
  int min_satellites = 4;
};

// Compares one epoch against its predecessor. With no predecessor only the
// satellite check applies. No satellite in common between the epochs makes
// the pseudorange continuity unobservable, which is treated as a jump.
DiscontinuityFlags detect_discontinuities(const EpochBatch* prev,
                                          const EpochBatch& current,
                                          const DiscontinuityThresholds& thresholds = {});

enum class MachineKind { kWls, kMhe, kEkf, kRts };

enum class FsmLabel { kStop, kWarmUp, kRun, kHold };

enum class FsmAction {
  kRunWls,          // plain single-epoch solve
  kRunWlsFallback,  // single-epoch solve that also restarts a window
  kRunMhe,
  kRunEkfUpdate,
  kRunEkfHold,
  kRunRts,          // extend the current smoothing segment
  kEmitNone,
  kSegmentBoundary, // this epoch starts a new smoothing segment
};

std::string to_string(FsmLabel label);
std::string to_string(FsmAction action);

// Supervisor state for one estimator. counter0: consecutive epochs coasted
// through a satellite outage (EKF). counter1: consecutive continuous
// epochs (WLS/EKF warm-up). counter2: window fill (MHE). counter3: current
// smoothing segment length (RTS). flag1 mirrors clock-or-pseudorange
// discontinuity at the current epoch, flag2 the same one epoch ahead
// (RTS backward scan).
struct FsmState {
  MachineKind kind = MachineKind::kWls;
  FsmLabel label = FsmLabel::kStop;
  int counter0 = 0;
  int counter1 = 0;
  int counter2 = 0;
  int counter3 = 0;
  bool flag1 = false;
  bool flag2 = false;
  int hold_threshold = 10;   // Th: max epochs in Hold before Stop
  int warmup_epochs = 2;     // EKF: WLS seeds before the first update
  int window_capacity = 10;  // MHE: window size to declare Run
};

struct FsmStep {
  FsmState state;
  FsmAction action;
};

// Pure transition function; throws DomainError on an unknown
// machine/label combination (internal invariant).
FsmStep advance(const FsmState& fsm, const DiscontinuityFlags& flags);

}  // namespace gnsspvt

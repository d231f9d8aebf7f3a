#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gnsspvt/estimators.hpp"
#include "gnsspvt/eval.hpp"
#include "gnsspvt/fsm.hpp"
#include "gnsspvt/sim.hpp"

namespace gnsspvt {

enum class Method { kWls, kMhe, kEkf, kRts };

Method method_from_string(const std::string& name);
std::string to_string(Method method);

struct RunOptions {
  int mhe_window = 10;
  bool weighted_mhe = true;
  DiscontinuityThresholds thresholds;
  int hold_threshold = 10;
  UncertaintyFloors floors;
  SpectralDensityFloors density_floors;
  TransmitTimeOptions transmit;
  std::vector<Constellation> allowlist;
  EkfOptions ekf;
};

// One output row. Invalid rows keep their timestamp and FSM context but
// carry no estimate.
struct SolutionRow {
  std::int64_t utc_millis = 0;
  std::string method;
  bool valid = false;
  GeodeticPos pos;
  Eigen::Vector3d vel_enu_mps = Eigen::Vector3d::Zero();
  double clock_offset_m = 0.0;
  double clock_drift_mps = 0.0;
  std::string fsm_label;
  StateVector state_ecef = StateVector::Zero();  // not serialized
};

struct EpochDiagnostic {
  std::int64_t utc_millis = 0;
  std::string method;
  std::string fsm_label;
  std::string action;
  int satellites = 0;
  int iterations = 0;
  double residual_norm = 0.0;
  std::string note;  // error text when a solve failed
};

struct TraceResult {
  std::vector<SolutionRow> rows;
  std::vector<EpochDiagnostic> diagnostics;
};

// Runs one estimator over prepared epochs, FSM-supervised. The RTS method
// internally runs the forward filter and returns only smoothed rows; use
// run_rts_with_forward when the forward solution is wanted as well.
TraceResult run_method(const std::vector<EpochBatch>& epochs, Method method,
                       const RunOptions& opts = {});

struct RtsProduct {
  TraceResult forward;   // EKF rows
  TraceResult smoothed;  // RTS rows
};

RtsProduct run_rts_with_forward(const std::vector<EpochBatch>& epochs,
                                const RunOptions& opts = {});

// ---- file-level entry points (the CLI surfaces) ----

struct SolveConfig {
  Method method = Method::kWls;
  std::string log_path;
  std::string derived_path;  // optional: empty means no corrections file
  std::string out_dir;
  RunOptions run;
};

struct SolveSummary {
  std::map<std::string, std::size_t> valid_rows_by_method;
  std::vector<std::string> written_files;
};

// Parses inputs, runs the estimator, writes solutions_<method>.csv and
// diagnostics_<method>.csv into out_dir (the RTS method also writes the
// forward EKF pair). Throws EmptyInputError when no epoch is solvable.
SolveSummary run_solve(const SolveConfig& config);

struct ScoreConfig {
  std::string solutions_path;
  std::string truth_path;
  std::string out_dir;
  PercentileMethod percentile_method = PercentileMethod::kLinearInterpolation;
};

struct MethodScore {
  std::string method;
  std::size_t matched = 0;
  std::size_t dropped = 0;
  double score_m = 0.0;
  double p50_m = 0.0;
  double p95_m = 0.0;
  double horizontal_mean_m = 0.0;
  double vertical_p50_m = 0.0;
  double vertical_p95_m = 0.0;
};

struct ScoreSummary {
  std::vector<MethodScore> methods;
  std::vector<std::string> written_files;
};

// Matches solutions to truth, writes errors_<method>.csv,
// ecdf_horizontal_<method>.csv, ecdf_vertical_<method>.csv and a combined
// score_summary.csv.
ScoreSummary run_score(const ScoreConfig& config);

struct SimulateSummary {
  std::size_t epochs = 0;
  std::vector<std::string> written_files;
};

// Generates a scenario and writes gnss_log.txt, derived.csv,
// ground_truth.csv and scenario.json (the effective config echo).
SimulateSummary run_simulate(const std::string& config_path, const std::string& out_dir);

// ---- solution CSV round-trip (stable, byte-deterministic) ----

void write_solutions_csv(std::ostream& out, const std::vector<SolutionRow>& rows);
std::vector<SolutionRow> parse_solutions_csv(std::istream& in);

// Shortest round-trip decimal form; used by every writer so identical
// inputs yield identical bytes.
std::string format_double(double value);

}  // namespace gnsspvt

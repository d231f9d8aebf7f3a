#include "gnsspvt/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gnsspvt {

namespace fs = std::filesystem;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, static_cast<std::size_t>(ptr - buf));
}

Method method_from_string(const std::string& name) {
  std::string low;
  low.reserve(name.size());
  for (char ch : name) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (low == "wls") return Method::kWls;
  if (low == "mhe") return Method::kMhe;
  if (low == "ekf") return Method::kEkf;
  if (low == "rts") return Method::kRts;
  throw DomainError("unknown method '" + name + "' (expected wls|mhe|ekf|rts)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kWls: return "wls";
    case Method::kMhe: return "mhe";
    case Method::kEkf: return "ekf";
    case Method::kRts: return "rts";
  }
  return "?";
}

namespace {

SolutionRow make_row(std::int64_t utc_millis, const std::string& method,
                     const FsmLabel label) {
  SolutionRow row;
  row.utc_millis = utc_millis;
  row.method = method;
  row.fsm_label = to_string(label);
  return row;
}

void fill_row(SolutionRow& row, const StateVector& x) {
  row.valid = true;
  row.state_ecef = x;
  row.pos = ecef_to_geodetic(state_position(x));
  row.vel_enu_mps = enu_rotation(row.pos) * state_velocity(x);
  row.clock_offset_m = x[kIdxClockOffset];
  row.clock_drift_mps = x[kIdxClockDrift];
}

EpochDiagnostic make_diag(const EpochBatch& epoch, const std::string& method,
                          const FsmStep& step) {
  EpochDiagnostic d;
  d.utc_millis = epoch.utc_millis;
  d.method = method;
  d.fsm_label = to_string(step.state.label);
  d.action = to_string(step.action);
  d.satellites = static_cast<int>(epoch.measurements.size());
  return d;
}

TraceResult run_wls_trace(const std::vector<EpochBatch>& epochs, const RunOptions& opts) {
  TraceResult out;
  FsmState fsm;
  fsm.kind = MachineKind::kWls;
  std::optional<StateVector> last;
  const EpochBatch* prev = nullptr;

  for (const EpochBatch& epoch : epochs) {
    const DiscontinuityFlags flags = detect_discontinuities(prev, epoch, opts.thresholds);
    const FsmStep step = advance(fsm, flags);
    fsm = step.state;
    SolutionRow row = make_row(epoch.utc_millis, "wls", fsm.label);
    EpochDiagnostic diag = make_diag(epoch, "wls", step);

    if (step.action == FsmAction::kRunWls) {
      try {
        const WlsSolution sol =
            wls_solve(epoch, last ? *last : StateVector::Zero());
        if (!plausible_state(sol.state)) {
          throw NumericalError("solution outside plausible Earth neighborhood");
        }
        fill_row(row, sol.state);
        last = sol.state;
        diag.iterations = sol.diagnostics.iterations;
        diag.residual_norm = sol.diagnostics.weighted_residual_norm;
      } catch (const Error& e) {
        diag.note = e.what();
      }
    }
    out.rows.push_back(std::move(row));
    out.diagnostics.push_back(std::move(diag));
    prev = &epoch;
  }
  return out;
}

TraceResult run_mhe_trace(const std::vector<EpochBatch>& epochs, const RunOptions& opts) {
  TraceResult out;
  FsmState fsm;
  fsm.kind = MachineKind::kMhe;
  fsm.window_capacity = opts.mhe_window;
  MheWindow window(static_cast<std::size_t>(opts.mhe_window));
  MheOptions mhe_opts;
  mhe_opts.weighted = opts.weighted_mhe;
  std::optional<StateVector> last;
  const EpochBatch* prev = nullptr;

  for (const EpochBatch& epoch : epochs) {
    const DiscontinuityFlags flags = detect_discontinuities(prev, epoch, opts.thresholds);
    const FsmStep step = advance(fsm, flags);
    fsm = step.state;
    SolutionRow row = make_row(epoch.utc_millis, "mhe", fsm.label);
    EpochDiagnostic diag = make_diag(epoch, "mhe", step);

    switch (step.action) {
      case FsmAction::kEmitNone:
        // Chain broken: the surviving window spans an unusable epoch, so
        // its inverse-transition products no longer describe the data.
        window.clear();
        break;
      case FsmAction::kRunWlsFallback:
        window.clear();
        window.push(epoch);
        try {
          const WlsSolution sol = wls_solve(epoch, last ? *last : StateVector::Zero());
          if (!plausible_state(sol.state)) {
            throw NumericalError("solution outside plausible Earth neighborhood");
          }
          fill_row(row, sol.state);
          last = sol.state;
          diag.iterations = sol.diagnostics.iterations;
          diag.residual_norm = sol.diagnostics.weighted_residual_norm;
        } catch (const Error& e) {
          diag.note = e.what();
        }
        break;
      case FsmAction::kRunMhe: {
        if (fsm.counter2 == 1) window.clear();  // resuming after a Stop
        window.push(epoch);
        StateVector init = StateVector::Zero();
        if (last) {
          init = epoch.sample_period_s > 0.0
                     ? (state_transition(epoch.sample_period_s) * (*last)).eval()
                     : *last;
        }
        try {
          const StateVector sol = mhe_solve(window, init, mhe_opts);
          if (!plausible_state(sol)) {
            throw NumericalError("solution outside plausible Earth neighborhood");
          }
          fill_row(row, sol);
          last = sol;
        } catch (const Error& e) {
          diag.note = e.what();
          window.clear();
          last.reset();
        }
        break;
      }
      default:
        throw DomainError("run_mhe_trace: unexpected action " + to_string(step.action));
    }
    out.rows.push_back(std::move(row));
    out.diagnostics.push_back(std::move(diag));
    prev = &epoch;
  }
  return out;
}

struct EkfEpochRecord {
  FilterState state;
  Matrix8d transition = Matrix8d::Identity();  // propagation into this epoch
  FsmStep step{FsmState{}, FsmAction::kEmitNone};
};

struct EkfTrace {
  std::vector<EkfEpochRecord> records;
  TraceResult result;
};

EkfTrace run_ekf_trace(const std::vector<EpochBatch>& epochs, const RunOptions& opts) {
  EkfTrace trace;
  FsmState fsm;
  fsm.kind = MachineKind::kEkf;
  fsm.hold_threshold = opts.hold_threshold;

  FilterState cur;
  // Posterior history for the adaptive process noise: estimates plus
  // their timestamps, newest last.
  std::vector<std::pair<StateVector, std::int64_t>> history;
  const EpochBatch* prev = nullptr;

  auto full_reset = [&] {
    cur = FilterState{};
    history.clear();
    fsm.label = FsmLabel::kStop;
    fsm.counter0 = 0;
    fsm.counter1 = 0;
  };

  for (const EpochBatch& epoch : epochs) {
    const DiscontinuityFlags flags = detect_discontinuities(prev, epoch, opts.thresholds);
    const FsmStep step = advance(fsm, flags);
    fsm = step.state;
    SolutionRow row = make_row(epoch.utc_millis, "ekf", fsm.label);
    EpochDiagnostic diag = make_diag(epoch, "ekf", step);
    EkfEpochRecord rec;
    rec.step = step;

    switch (step.action) {
      case FsmAction::kEmitNone:
        full_reset();
        break;
      case FsmAction::kRunWls:
        if (fsm.counter1 == 1) history.clear();  // fresh warm-up chain
        try {
          const WlsSolution sol = wls_solve(epoch, history.empty() && !cur.valid
                                                       ? StateVector::Zero()
                                                       : cur.x_post);
          if (!plausible_state(sol.state)) {
            throw NumericalError("solution outside plausible Earth neighborhood");
          }
          cur = FilterState{};
          cur.x_post = sol.state;
          cur.p_post = default_seed_covariance();
          cur.valid = true;
          cur.has_prior = false;
          history.emplace_back(sol.state, epoch.utc_millis);
          fill_row(row, sol.state);
          diag.iterations = sol.diagnostics.iterations;
          diag.residual_norm = sol.diagnostics.weighted_residual_norm;
        } catch (const Error& e) {
          diag.note = e.what();
          full_reset();
        }
        break;
      case FsmAction::kRunEkfUpdate:
      case FsmAction::kRunEkfHold: {
        try {
          if (history.size() < 2) {
            throw NumericalError("filter history too short for process noise");
          }
          const double ts = epoch.sample_period_s;
          const double ts_prev =
              static_cast<double>(history.back().second -
                                  history[history.size() - 2].second) /
              1000.0;
          const SpectralDensities densities = estimate_spectral_densities(
              history.back().first, history[history.size() - 2].first, ts_prev,
              opts.density_floors);
          const ProcessModel model = make_process_model(ts, densities);
          rec.transition = model.transition;
          cur = step.action == FsmAction::kRunEkfUpdate
                    ? ekf_step(cur, model, epoch, opts.ekf)
                    : ekf_hold(cur, model);
          if (!plausible_state(cur.x_post)) {
            throw NumericalError("solution outside plausible Earth neighborhood");
          }
          history.emplace_back(cur.x_post, epoch.utc_millis);
          fill_row(row, cur.x_post);
        } catch (const Error& e) {
          diag.note = e.what();
          full_reset();
        }
        break;
      }
      default:
        throw DomainError("run_ekf_trace: unexpected action " + to_string(step.action));
    }

    rec.state = row.valid ? cur : FilterState{};
    trace.records.push_back(rec);
    trace.result.rows.push_back(std::move(row));
    trace.result.diagnostics.push_back(std::move(diag));
    prev = &epoch;
  }
  return trace;
}

TraceResult run_rts_trace(const std::vector<EpochBatch>& epochs, const RunOptions& opts,
                          EkfTrace& trace) {
  const std::size_t n = trace.records.size();

  // Backward scan with the segmentation machine: an empty forward estimate
  // acts as the satellite flag, a re-seeded successor (no propagated
  // prior) as the discontinuity flag.
  std::vector<FsmAction> actions(n, FsmAction::kEmitNone);
  FsmState fsm;
  fsm.kind = MachineKind::kRts;
  for (std::size_t k = n; k-- > 0;) {
    DiscontinuityFlags flags;
    flags.satellite = !trace.records[k].state.valid;
    flags.clock = k + 1 < n && trace.records[k + 1].state.valid &&
                  !trace.records[k + 1].state.has_prior;
    const FsmStep step = advance(fsm, flags);
    fsm = step.state;
    actions[k] = step.action;
  }

  // Contiguous segments in forward order: valid epochs, chained by
  // propagated priors.
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // [first, last]
  std::optional<std::size_t> start;
  for (std::size_t k = 0; k < n; ++k) {
    const bool valid = trace.records[k].state.valid;
    if (!valid) {
      if (start) segments.emplace_back(*start, k - 1);
      start.reset();
      continue;
    }
    if (start && !trace.records[k].state.has_prior) {
      segments.emplace_back(*start, k - 1);
      start = k;
    } else if (!start) {
      start = k;
    }
  }
  if (start) segments.emplace_back(*start, n - 1);

  TraceResult out;
  out.rows.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    SolutionRow row = make_row(epochs[k].utc_millis, "rts",
                               trace.records[k].state.valid ? FsmLabel::kRun : FsmLabel::kStop);
    out.rows.push_back(std::move(row));
    EpochDiagnostic diag = make_diag(epochs[k], "rts", trace.records[k].step);
    diag.fsm_label = trace.records[k].state.valid ? "run" : "stop";
    diag.action = to_string(actions[k]);
    out.diagnostics.push_back(std::move(diag));
  }

  for (const auto& [first, last] : segments) {
    const std::size_t len = last - first + 1;
    std::vector<FilterState> states(len);
    std::vector<Matrix8d> transitions;
    transitions.reserve(len - 1);
    for (std::size_t i = 0; i < len; ++i) states[i] = trace.records[first + i].state;
    for (std::size_t i = 1; i < len; ++i) {
      transitions.push_back(trace.records[first + i].transition);
    }
    const std::vector<SmootherState> smoothed = rts_smooth(states, transitions);
    for (std::size_t i = 0; i < len; ++i) {
      fill_row(out.rows[first + i], smoothed[i].x_smooth);
      out.rows[first + i].fsm_label = "run";
    }
  }
  (void)opts;
  return out;
}

}  // namespace

TraceResult run_method(const std::vector<EpochBatch>& epochs, Method method,
                       const RunOptions& opts) {
  switch (method) {
    case Method::kWls: return run_wls_trace(epochs, opts);
    case Method::kMhe: return run_mhe_trace(epochs, opts);
    case Method::kEkf: return run_ekf_trace(epochs, opts).result;
    case Method::kRts: return run_rts_with_forward(epochs, opts).smoothed;
  }
  throw DomainError("run_method: unknown method");
}

RtsProduct run_rts_with_forward(const std::vector<EpochBatch>& epochs,
                                const RunOptions& opts) {
  RtsProduct product;
  EkfTrace trace = run_ekf_trace(epochs, opts);
  product.smoothed = run_rts_trace(epochs, opts, trace);
  product.forward = std::move(trace.result);
  return product;
}

// ---- CSV emission ----

namespace {

std::string sanitize(std::string text) {
  for (char& ch : text) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return text;
}

void write_diagnostics_csv(std::ostream& out, const std::vector<EpochDiagnostic>& diags) {
  out << "utc_millis,method,fsm_state,action,satellites,iterations,residual_norm,note\n";
  for (const EpochDiagnostic& d : diags) {
    out << d.utc_millis << ',' << d.method << ',' << d.fsm_label << ',' << d.action << ','
        << d.satellites << ',' << d.iterations << ',' << format_double(d.residual_norm)
        << ',' << sanitize(d.note) << '\n';
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);
  return in;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == '\n')) field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_solutions_csv(std::ostream& out, const std::vector<SolutionRow>& rows) {
  out << "utc_millis,method,valid,lat_deg,lon_deg,alt_m,vel_east_mps,vel_north_mps,"
         "vel_up_mps,clock_offset_m,clock_drift_mps,fsm_state\n";
  for (const SolutionRow& r : rows) {
    out << r.utc_millis << ',' << r.method << ',' << (r.valid ? 1 : 0) << ',';
    if (r.valid) {
      out << format_double(r.pos.lat_deg) << ',' << format_double(r.pos.lon_deg) << ','
          << format_double(r.pos.alt_m) << ',' << format_double(r.vel_enu_mps.x()) << ','
          << format_double(r.vel_enu_mps.y()) << ',' << format_double(r.vel_enu_mps.z())
          << ',' << format_double(r.clock_offset_m) << ','
          << format_double(r.clock_drift_mps);
    } else {
      out << ",,,,,,,";
    }
    out << ',' << r.fsm_label << '\n';
  }
}

std::vector<SolutionRow> parse_solutions_csv(std::istream& in) {
  std::vector<SolutionRow> rows;
  std::string line;
  bool have_header = false;
  std::vector<std::string> header;
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw FormatError("solutions csv: missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t i_utc = 0, i_method = 0, i_valid = 0, i_lat = 0, i_lon = 0, i_alt = 0;
  std::size_t i_ve = 0, i_vn = 0, i_vu = 0, i_co = 0, i_cd = 0, i_fsm = 0;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!have_header) {
      header = split_line(line);
      i_utc = col("utc_millis");
      i_method = col("method");
      i_valid = col("valid");
      i_lat = col("lat_deg");
      i_lon = col("lon_deg");
      i_alt = col("alt_m");
      i_ve = col("vel_east_mps");
      i_vn = col("vel_north_mps");
      i_vu = col("vel_up_mps");
      i_co = col("clock_offset_m");
      i_cd = col("clock_drift_mps");
      i_fsm = col("fsm_state");
      have_header = true;
      continue;
    }
    const auto f = split_line(line);
    if (f.size() < header.size()) throw FormatError("solutions csv: short row");
    SolutionRow r;
    try {
      r.utc_millis = std::stoll(f[i_utc]);
      r.method = f[i_method];
      if (f[i_valid] != "0" && f[i_valid] != "1") {
        throw FormatError("solutions csv: valid column must be 0 or 1");
      }
      r.valid = f[i_valid] == "1";
      if (r.valid) {
        r.pos.lat_deg = std::stod(f[i_lat]);
        r.pos.lon_deg = std::stod(f[i_lon]);
        r.pos.alt_m = std::stod(f[i_alt]);
        r.vel_enu_mps = Eigen::Vector3d(std::stod(f[i_ve]), std::stod(f[i_vn]),
                                        std::stod(f[i_vu]));
        r.clock_offset_m = std::stod(f[i_co]);
        r.clock_drift_mps = std::stod(f[i_cd]);
      }
    } catch (const std::logic_error&) {
      throw FormatError("solutions csv: unparseable row: " + line);
    }
    r.fsm_label = f[i_fsm];
    rows.push_back(std::move(r));
  }
  if (!have_header) throw FormatError("solutions csv: no header");
  return rows;
}

// ---- file-level entry points ----

SolveSummary run_solve(const SolveConfig& config) {
  auto log_in = open_in(config.log_path);
  const GnssLog log = parse_gnss_log(log_in);

  DerivedTable derived;
  if (!config.derived_path.empty()) {
    auto derived_in = open_in(config.derived_path);
    derived = parse_derived_csv(derived_in);
  }

  EpochBuildOptions build_opts;
  build_opts.floors = config.run.floors;
  build_opts.transmit = config.run.transmit;
  build_opts.allowlist = config.run.allowlist;
  const std::vector<EpochBatch> epochs =
      build_epochs(log.epochs, derived.by_key, build_opts);
  if (epochs.empty()) {
    throw EmptyInputError(
        "no solvable epochs (every measurement dropped; is the corrections file "
        "missing or mismatched?)");
  }

  fs::create_directories(config.out_dir);
  SolveSummary summary;
  auto emit = [&](const std::string& name, const TraceResult& result) {
    const fs::path sol_path = fs::path(config.out_dir) / ("solutions_" + name + ".csv");
    auto sol_out = open_out(sol_path);
    write_solutions_csv(sol_out, result.rows);
    const fs::path diag_path = fs::path(config.out_dir) / ("diagnostics_" + name + ".csv");
    auto diag_out = open_out(diag_path);
    write_diagnostics_csv(diag_out, result.diagnostics);
    summary.written_files.push_back(sol_path.string());
    summary.written_files.push_back(diag_path.string());
    std::size_t valid = 0;
    for (const auto& r : result.rows) valid += r.valid ? 1 : 0;
    summary.valid_rows_by_method[name] = valid;
  };

  if (config.method == Method::kRts) {
    const RtsProduct product = run_rts_with_forward(epochs, config.run);
    emit("ekf", product.forward);
    emit("rts", product.smoothed);
  } else {
    emit(to_string(config.method), run_method(epochs, config.method, config.run));
  }
  return summary;
}

ScoreSummary run_score(const ScoreConfig& config) {
  auto sol_in = open_in(config.solutions_path);
  const std::vector<SolutionRow> rows = parse_solutions_csv(sol_in);
  auto truth_in = open_in(config.truth_path);
  const GroundTruth truth = parse_ground_truth(truth_in);

  // Group by method in order of first appearance.
  std::vector<std::string> methods;
  for (const SolutionRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  if (methods.empty()) throw EmptyInputError("solutions csv: no rows");

  fs::create_directories(config.out_dir);
  ScoreSummary summary;

  for (const std::string& method : methods) {
    std::vector<TimedGeodetic> solutions;
    std::size_t invalid = 0;
    for (const SolutionRow& r : rows) {
      if (r.method != method) continue;
      if (!r.valid) {
        ++invalid;
        continue;
      }
      solutions.push_back({r.utc_millis, r.pos});
    }
    if (solutions.empty()) {
      throw EmptyInputError("solutions csv: method '" + method + "' has no valid rows");
    }

    std::size_t outside = 0;
    const auto matched = match_truth(solutions, truth.points, &outside);

    std::vector<ErrorRecord> errors;
    errors.reserve(matched.size());
    std::vector<double> horizontal, vertical;
    for (const auto& [sol, tru] : matched) {
      errors.push_back(make_error_record(sol, tru, method));
      horizontal.push_back(errors.back().horizontal_m);
      vertical.push_back(errors.back().vertical_m);
    }

    const fs::path err_path = fs::path(config.out_dir) / ("errors_" + method + ".csv");
    {
      auto out = open_out(err_path);
      out << "utc_millis,method,east_m,north_m,up_m,horizontal_m,vertical_m\n";
      for (const ErrorRecord& e : errors) {
        out << e.utc_millis << ',' << e.method << ',' << format_double(e.east_m) << ','
            << format_double(e.north_m) << ',' << format_double(e.up_m) << ','
            << format_double(e.horizontal_m) << ',' << format_double(e.vertical_m) << '\n';
      }
    }
    summary.written_files.push_back(err_path.string());

    auto write_ecdf = [&](const std::string& stem, const std::vector<double>& values) {
      const fs::path path = fs::path(config.out_dir) / (stem + "_" + method + ".csv");
      auto out = open_out(path);
      out << "value_m,fraction\n";
      for (const auto& [value, fraction] : ecdf(values)) {
        out << format_double(value) << ',' << format_double(fraction) << '\n';
      }
      summary.written_files.push_back(path.string());
    };
    write_ecdf("ecdf_horizontal", horizontal);
    write_ecdf("ecdf_vertical", vertical);

    MethodScore score;
    score.method = method;
    score.matched = matched.size();
    score.dropped = invalid + outside;
    score.p50_m = percentile(horizontal, 0.50, config.percentile_method);
    score.p95_m = percentile(horizontal, 0.95, config.percentile_method);
    score.score_m = horizontal_score(horizontal, config.percentile_method);
    double sum = 0.0;
    for (double h : horizontal) sum += h;
    score.horizontal_mean_m = sum / static_cast<double>(horizontal.size());
    score.vertical_p50_m = percentile(vertical, 0.50, config.percentile_method);
    score.vertical_p95_m = percentile(vertical, 0.95, config.percentile_method);
    summary.methods.push_back(std::move(score));
  }

  const fs::path summary_path = fs::path(config.out_dir) / "score_summary.csv";
  {
    auto out = open_out(summary_path);
    out << "method,matched,dropped,score_m,p50_m,p95_m,horizontal_mean_m,"
           "vertical_p50_m,vertical_p95_m\n";
    for (const MethodScore& s : summary.methods) {
      out << s.method << ',' << s.matched << ',' << s.dropped << ','
          << format_double(s.score_m) << ',' << format_double(s.p50_m) << ','
          << format_double(s.p95_m) << ',' << format_double(s.horizontal_mean_m) << ','
          << format_double(s.vertical_p50_m) << ',' << format_double(s.vertical_p95_m)
          << '\n';
    }
  }
  summary.written_files.push_back(summary_path.string());
  return summary;
}

SimulateSummary run_simulate(const std::string& config_path, const std::string& out_dir) {
  auto in = open_in(config_path);
  const ScenarioConfig config = scenario_from_json(in);
  const Scenario scenario = generate_scenario(config);

  fs::create_directories(out_dir);
  SimulateSummary summary;
  summary.epochs = scenario.epochs.size();

  const fs::path log_path = fs::path(out_dir) / "gnss_log.txt";
  {
    auto out = open_out(log_path);
    write_gnss_log(out, scenario.raw_epochs);
  }
  summary.written_files.push_back(log_path.string());

  const fs::path derived_path = fs::path(out_dir) / "derived.csv";
  {
    auto out = open_out(derived_path);
    write_derived_csv(out, scenario.corrections);
  }
  summary.written_files.push_back(derived_path.string());

  const fs::path truth_path = fs::path(out_dir) / "ground_truth.csv";
  {
    auto out = open_out(truth_path);
    write_ground_truth_csv(out, scenario.ground_truth);
  }
  summary.written_files.push_back(truth_path.string());

  const fs::path echo_path = fs::path(out_dir) / "scenario.json";
  {
    auto out = open_out(echo_path);
    out << scenario_to_json(config);
  }
  summary.written_files.push_back(echo_path.string());
  return summary;
}

}  // namespace gnsspvt

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gnsspvt/pipeline.hpp"

using namespace gnsspvt;
namespace fs = std::filesystem;

namespace {

ScenarioConfig quiet_config(double duration_s, double sigma_rho = 3.0) {
  ScenarioConfig c;
  c.seed = 7;
  c.duration_s = duration_s;
  c.rate_hz = 1.0;
  c.satellite_count = 8;
  c.sigma_rho_m = sigma_rho;
  c.sigma_rho_dot_mps = 0.2;
  return c;
}

double position_error(const SolutionRow& row, const StateVector& truth) {
  return (state_position(row.state_ecef) - state_position(truth)).norm();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("format_double emits shortest round-trip forms") {
  CHECK_EQ(format_double(0.0), "0");
  CHECK_EQ(format_double(1.0), "1");
  CHECK_EQ(format_double(0.1), "0.1");
  CHECK_EQ(format_double(-2.5), "-2.5");
  CHECK_EQ(format_double(std::nan("")), "nan");
  CHECK_EQ(format_double(HUGE_VAL), "inf");
  CHECK_EQ(format_double(-HUGE_VAL), "-inf");

  // Round trip is exact for arbitrary finite bit patterns.
  std::mt19937_64 rng(99);
  int tested = 0;
  while (tested < 500) {
    const std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    ++tested;
    const double back = std::stod(format_double(x));
    CHECK_EQ(back, x);
  }
}

TEST_CASE("method names round trip") {
  for (Method m : {Method::kWls, Method::kMhe, Method::kEkf, Method::kRts}) {
    CHECK_EQ(method_from_string(to_string(m)), m);
  }
  CHECK_EQ(method_from_string("EKF"), Method::kEkf);  // case-insensitive
  CHECK_THROWS_AS(method_from_string("kalman"), DomainError);
}

TEST_CASE("solutions csv round trip is byte-stable") {
  std::vector<SolutionRow> rows(3);
  rows[0].utc_millis = 1299456000000;
  rows[0].method = "wls";
  rows[0].valid = true;
  rows[0].pos = {1.3521, 103.8198, 50.25};
  rows[0].vel_enu_mps = Eigen::Vector3d(0.125, -3.5, 0.0625);
  rows[0].clock_offset_m = 123.456;
  rows[0].clock_drift_mps = 1.5;
  rows[0].fsm_label = "run";
  rows[1].utc_millis = 1299456001000;
  rows[1].method = "wls";
  rows[1].valid = false;  // estimate withheld, context kept
  rows[1].fsm_label = "stop";
  rows[2] = rows[0];
  rows[2].utc_millis = 1299456002000;
  rows[2].pos.lat_deg = 1.3522222220001;  // needs full precision
  rows[2].fsm_label = "hold";

  std::ostringstream first;
  write_solutions_csv(first, rows);
  std::istringstream back(first.str());
  const std::vector<SolutionRow> parsed = parse_solutions_csv(back);

  REQUIRE_EQ(parsed.size(), rows.size());
  CHECK_EQ(parsed[0].utc_millis, rows[0].utc_millis);
  CHECK_EQ(parsed[0].method, "wls");
  CHECK(parsed[0].valid);
  CHECK_EQ(parsed[0].pos.lat_deg, rows[0].pos.lat_deg);    // exact, not approx
  CHECK_EQ(parsed[0].clock_offset_m, rows[0].clock_offset_m);
  CHECK_EQ(parsed[0].vel_enu_mps.y(), rows[0].vel_enu_mps.y());
  CHECK_FALSE(parsed[1].valid);
  CHECK_EQ(parsed[1].fsm_label, "stop");
  CHECK_EQ(parsed[1].pos.lat_deg, 0.0);  // defaults, nothing leaked in
  CHECK_EQ(parsed[2].pos.lat_deg, rows[2].pos.lat_deg);

  std::ostringstream second;
  write_solutions_csv(second, parsed);
  CHECK_EQ(first.str(), second.str());
}

TEST_CASE("solutions csv parser rejects malformed input") {
  SUBCASE("empty stream") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_solutions_csv(in), FormatError);
  }
  SUBCASE("missing column") {
    std::istringstream in("utc_millis,method,valid\n1,wls,0\n");
    CHECK_THROWS_AS(parse_solutions_csv(in), FormatError);
  }
  SUBCASE("short row") {
    std::istringstream in(
        "utc_millis,method,valid,lat_deg,lon_deg,alt_m,vel_east_mps,vel_north_mps,"
        "vel_up_mps,clock_offset_m,clock_drift_mps,fsm_state\n"
        "1000,wls,1,1.0\n");
    CHECK_THROWS_AS(parse_solutions_csv(in), FormatError);
  }
  SUBCASE("valid flag out of range") {
    std::istringstream in(
        "utc_millis,method,valid,lat_deg,lon_deg,alt_m,vel_east_mps,vel_north_mps,"
        "vel_up_mps,clock_offset_m,clock_drift_mps,fsm_state\n"
        "1000,wls,2,1,2,3,4,5,6,7,8,run\n");
    CHECK_THROWS_AS(parse_solutions_csv(in), FormatError);
  }
  SUBCASE("unparseable number in a valid row") {
    std::istringstream in(
        "utc_millis,method,valid,lat_deg,lon_deg,alt_m,vel_east_mps,vel_north_mps,"
        "vel_up_mps,clock_offset_m,clock_drift_mps,fsm_state\n"
        "1000,wls,1,abc,2,3,4,5,6,7,8,run\n");
    CHECK_THROWS_AS(parse_solutions_csv(in), FormatError);
  }
  SUBCASE("permuted columns are accepted") {
    std::istringstream in(
        "method,utc_millis,valid,lon_deg,lat_deg,alt_m,vel_east_mps,vel_north_mps,"
        "vel_up_mps,clock_offset_m,clock_drift_mps,fsm_state\n"
        "wls,1000,1,103.5,1.25,50,0,0,0,10,1,run\n");
    const auto rows = parse_solutions_csv(in);
    REQUIRE_EQ(rows.size(), 1);
    CHECK_EQ(rows[0].pos.lat_deg, 1.25);
    CHECK_EQ(rows[0].pos.lon_deg, 103.5);
  }
}

TEST_CASE("snapshot trace solves every clean epoch") {
  const Scenario s = generate_scenario(quiet_config(40.0));
  const TraceResult trace = run_method(s.epochs, Method::kWls);

  REQUIRE_EQ(trace.rows.size(), s.epochs.size());
  REQUIRE_EQ(trace.diagnostics.size(), s.epochs.size());
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    CHECK(trace.rows[k].valid);
    CHECK_EQ(trace.rows[k].method, "wls");
    CHECK_EQ(trace.rows[k].fsm_label, "run");
    CHECK_EQ(trace.diagnostics[k].action, "run-wls");
    CHECK_EQ(trace.diagnostics[k].satellites, 8);
    CHECK(trace.diagnostics[k].iterations >= 1);
    CHECK(position_error(trace.rows[k], s.truth[k]) < 15.0);
  }
}

TEST_CASE("filter trace warms up on snapshots then tracks") {
  const Scenario s = generate_scenario(quiet_config(30.0));
  const TraceResult trace = run_method(s.epochs, Method::kEkf);

  REQUIRE_EQ(trace.rows.size(), 30);
  CHECK_EQ(trace.rows[0].fsm_label, "warm-up");
  CHECK_EQ(trace.diagnostics[0].action, "run-wls");
  CHECK_EQ(trace.rows[1].fsm_label, "warm-up");
  CHECK_EQ(trace.diagnostics[1].action, "run-wls");
  CHECK_EQ(trace.rows[2].fsm_label, "run");
  CHECK_EQ(trace.diagnostics[2].action, "run-ekf-update");
  for (const SolutionRow& r : trace.rows) CHECK(r.valid);

  // The filter should do no worse than the per-epoch snapshots overall.
  const TraceResult snap = run_method(s.epochs, Method::kWls);
  double ekf_sq = 0.0, wls_sq = 0.0;
  for (std::size_t k = 5; k < trace.rows.size(); ++k) {
    const double e = position_error(trace.rows[k], s.truth[k]);
    const double w = position_error(snap.rows[k], s.truth[k]);
    ekf_sq += e * e;
    wls_sq += w * w;
  }
  CHECK(ekf_sq < wls_sq);
}

TEST_CASE("sliding-window trace fills its window before claiming run") {
  const Scenario s = generate_scenario(quiet_config(25.0));
  RunOptions opts;
  opts.mhe_window = 10;
  const TraceResult trace = run_method(s.epochs, Method::kMhe, opts);

  REQUIRE_EQ(trace.rows.size(), 25);
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK_EQ(trace.rows[k].fsm_label, "warm-up");
    CHECK_EQ(trace.diagnostics[k].action, "run-mhe");
  }
  CHECK_EQ(trace.rows[9].fsm_label, "run");
  for (std::size_t k = 9; k < 25; ++k) CHECK_EQ(trace.rows[k].fsm_label, "run");
  for (const SolutionRow& r : trace.rows) CHECK(r.valid);
}

TEST_CASE("satellite outage drives hold, then stop, then re-warm-up") {
  ScenarioConfig c = quiet_config(30.0);
  c.faults.push_back({5, FaultKind::kSatelliteDrop, 12.0});  // epochs 5..16
  const Scenario s = generate_scenario(c);

  SUBCASE("filter holds through the gap up to its patience") {
    const TraceResult trace = run_method(s.epochs, Method::kEkf);
    for (std::size_t k = 5; k <= 14; ++k) {
      CHECK_EQ(trace.rows[k].fsm_label, "hold");
      CHECK_EQ(trace.diagnostics[k].action, "run-ekf-hold");
      CHECK(trace.rows[k].valid);  // coasted estimate still emitted
    }
    CHECK_EQ(trace.rows[15].fsm_label, "stop");
    CHECK_EQ(trace.diagnostics[15].action, "emit-none");
    CHECK_FALSE(trace.rows[15].valid);
    CHECK_FALSE(trace.rows[16].valid);
    CHECK_EQ(trace.rows[17].fsm_label, "warm-up");
    CHECK_EQ(trace.diagnostics[17].action, "run-wls");
    CHECK(trace.rows[17].valid);
    CHECK_EQ(trace.rows[19].fsm_label, "run");
  }

  SUBCASE("a shorter outage never leaves hold") {
    ScenarioConfig short_c = quiet_config(20.0);
    short_c.faults.push_back({5, FaultKind::kSatelliteDrop, 4.0});
    const Scenario s2 = generate_scenario(short_c);
    const TraceResult trace = run_method(s2.epochs, Method::kEkf);
    for (std::size_t k = 5; k <= 8; ++k) CHECK_EQ(trace.rows[k].fsm_label, "hold");
    CHECK_EQ(trace.rows[9].fsm_label, "run");  // recovered without re-seeding
    CHECK_EQ(trace.diagnostics[9].action, "run-ekf-update");
  }

  SUBCASE("snapshot and window traces stop for the whole outage") {
    for (Method m : {Method::kWls, Method::kMhe}) {
      const TraceResult trace = run_method(s.epochs, m);
      for (std::size_t k = 5; k <= 16; ++k) {
        CHECK_FALSE(trace.rows[k].valid);
        CHECK_EQ(trace.rows[k].fsm_label, "stop");
        CHECK_EQ(trace.diagnostics[k].action, "emit-none");
      }
      CHECK(trace.rows[17].valid);
      CHECK(trace.rows[4].valid);
    }
  }
}

TEST_CASE("clock-discontinuity fallback inside the sliding window") {
  ScenarioConfig c = quiet_config(30.0);
  c.faults.push_back({15, FaultKind::kPseudorangeJump, 60000.0});
  const Scenario s = generate_scenario(c);
  const TraceResult trace = run_method(s.epochs, Method::kMhe);

  CHECK_EQ(trace.rows[14].fsm_label, "run");
  CHECK_EQ(trace.diagnostics[15].action, "run-wls-fallback");
  CHECK_EQ(trace.rows[15].fsm_label, "warm-up");
  CHECK(trace.rows[15].valid);  // fallback still produces a fix
  CHECK_EQ(trace.diagnostics[16].action, "run-mhe");
  CHECK_EQ(trace.rows[24].fsm_label, "run");  // window refilled
  // The clock step lands in the clock estimate, not the position.
  CHECK(trace.rows[15].clock_offset_m - trace.rows[14].clock_offset_m > 50000.0);
  CHECK(position_error(trace.rows[15], s.truth[15]) < 15.0);
}

TEST_CASE("timeline gap re-seeds the filter") {
  ScenarioConfig c = quiet_config(20.0);
  c.faults.push_back({10, FaultKind::kGap, 15.0});
  const Scenario s = generate_scenario(c);
  const TraceResult trace = run_method(s.epochs, Method::kEkf);

  CHECK_EQ(trace.rows[9].fsm_label, "run");
  CHECK_EQ(trace.rows[10].fsm_label, "warm-up");
  CHECK_EQ(trace.diagnostics[10].action, "run-wls");
  CHECK_EQ(trace.rows[11].fsm_label, "warm-up");
  CHECK_EQ(trace.rows[12].fsm_label, "run");
  for (const SolutionRow& r : trace.rows) CHECK(r.valid);
}

TEST_CASE("smoother runs backward over forward segments") {
  const Scenario s = generate_scenario(quiet_config(120.0, 8.0));
  const RtsProduct product = run_rts_with_forward(s.epochs);

  REQUIRE_EQ(product.forward.rows.size(), 120);
  REQUIRE_EQ(product.smoothed.rows.size(), 120);
  CHECK_EQ(product.forward.rows[0].method, "ekf");
  CHECK_EQ(product.smoothed.rows[0].method, "rts");
  for (const SolutionRow& r : product.smoothed.rows) {
    CHECK(r.valid);
    CHECK_EQ(r.fsm_label, "run");
  }
  // Segment boundaries separate the un-propagated seed epochs; everything
  // after flows backward as one pass.
  CHECK_EQ(product.smoothed.diagnostics[0].action, "segment-boundary");
  CHECK_EQ(product.smoothed.diagnostics[5].action, "run-rts");
  CHECK_EQ(product.smoothed.diagnostics[119].action, "run-rts");

  double fwd_sq = 0.0, smooth_sq = 0.0;
  for (std::size_t k = 0; k < 120; ++k) {
    const double f = position_error(product.forward.rows[k], s.truth[k]);
    const double m = position_error(product.smoothed.rows[k], s.truth[k]);
    fwd_sq += f * f;
    smooth_sq += m * m;
  }
  CHECK(smooth_sq < fwd_sq);

  // run_method(kRts) is exactly the smoothed half.
  const TraceResult direct = run_method(s.epochs, Method::kRts);
  REQUIRE_EQ(direct.rows.size(), product.smoothed.rows.size());
  for (std::size_t k = 0; k < direct.rows.size(); ++k) {
    CHECK_EQ(direct.rows[k].state_ecef[kIdxX], product.smoothed.rows[k].state_ecef[kIdxX]);
  }
}

TEST_CASE("smoother skips epochs the forward filter abandoned") {
  ScenarioConfig c = quiet_config(30.0);
  c.faults.push_back({5, FaultKind::kSatelliteDrop, 12.0});
  const Scenario s = generate_scenario(c);
  const RtsProduct product = run_rts_with_forward(s.epochs);

  for (std::size_t k = 5; k <= 14; ++k) CHECK(product.smoothed.rows[k].valid);
  CHECK_FALSE(product.smoothed.rows[15].valid);
  CHECK_EQ(product.smoothed.rows[15].fsm_label, "stop");
  CHECK_FALSE(product.smoothed.rows[16].valid);
  CHECK(product.smoothed.rows[17].valid);
  CHECK_EQ(product.smoothed.diagnostics[16].action, "emit-none");
}

TEST_CASE("empty epoch list yields empty traces") {
  const std::vector<EpochBatch> none;
  for (Method m : {Method::kWls, Method::kMhe, Method::kEkf, Method::kRts}) {
    const TraceResult trace = run_method(none, m);
    CHECK(trace.rows.empty());
    CHECK(trace.diagnostics.empty());
  }
}

TEST_CASE("file-level pipeline: simulate, solve, score") {
  const fs::path root = fs::temp_directory_path() / "gnsspvt_pipeline_e2e";
  fs::remove_all(root);
  fs::create_directories(root);

  const fs::path config_path = root / "scenario.json";
  {
    std::ofstream out(config_path);
    out << R"({"seed": 11, "duration_s": 40,
               "noise": {"sigma_rho_m": 5.0, "sigma_rho_dot_mps": 0.4}})";
  }

  const SimulateSummary sim = run_simulate(config_path.string(), (root / "data").string());
  CHECK_EQ(sim.epochs, 40);
  REQUIRE_EQ(sim.written_files.size(), 4);
  for (const std::string& f : sim.written_files) CHECK(fs::exists(f));
  CHECK(fs::exists(root / "data" / "gnss_log.txt"));
  CHECK(fs::exists(root / "data" / "scenario.json"));

  SolveConfig solve;
  solve.method = Method::kRts;
  solve.log_path = (root / "data" / "gnss_log.txt").string();
  solve.derived_path = (root / "data" / "derived.csv").string();
  solve.out_dir = (root / "out").string();
  const SolveSummary solved = run_solve(solve);
  CHECK_EQ(solved.valid_rows_by_method.at("ekf"), 40);
  CHECK_EQ(solved.valid_rows_by_method.at("rts"), 40);
  REQUIRE_EQ(solved.written_files.size(), 4);
  CHECK(fs::exists(root / "out" / "solutions_rts.csv"));
  CHECK(fs::exists(root / "out" / "diagnostics_ekf.csv"));

  SUBCASE("solve output is byte-deterministic") {
    SolveConfig again = solve;
    again.out_dir = (root / "out2").string();
    run_solve(again);
    CHECK_EQ(slurp(root / "out" / "solutions_rts.csv"),
             slurp(root / "out2" / "solutions_rts.csv"));
    CHECK_EQ(slurp(root / "out" / "diagnostics_rts.csv"),
             slurp(root / "out2" / "diagnostics_rts.csv"));
  }

  SUBCASE("solve without corrections has nothing to work with") {
    SolveConfig bare = solve;
    bare.derived_path.clear();
    bare.out_dir = (root / "out3").string();
    CHECK_THROWS_AS(run_solve(bare), EmptyInputError);
  }

  SUBCASE("scoring the smoothed run") {
    ScoreConfig score;
    score.solutions_path = (root / "out" / "solutions_rts.csv").string();
    score.truth_path = (root / "data" / "ground_truth.csv").string();
    score.out_dir = (root / "score").string();
    const ScoreSummary scored = run_score(score);
    REQUIRE_EQ(scored.methods.size(), 1);
    const MethodScore& m = scored.methods[0];
    CHECK_EQ(m.method, "rts");
    CHECK_EQ(m.matched, 40);
    CHECK_EQ(m.dropped, 0);
    CHECK(m.score_m > 0.0);
    CHECK(m.score_m < 30.0);
    CHECK(m.p95_m >= m.p50_m);
    CHECK(m.horizontal_mean_m > 0.0);
    REQUIRE_EQ(scored.written_files.size(), 4);
    CHECK(fs::exists(root / "score" / "errors_rts.csv"));
    CHECK(fs::exists(root / "score" / "ecdf_horizontal_rts.csv"));
    CHECK(fs::exists(root / "score" / "ecdf_vertical_rts.csv"));
    CHECK(fs::exists(root / "score" / "score_summary.csv"));
  }

  SUBCASE("scoring groups methods by first appearance") {
    const std::string ekf_text = slurp(root / "out" / "solutions_ekf.csv");
    std::string rts_text = slurp(root / "out" / "solutions_rts.csv");
    rts_text.erase(0, rts_text.find('\n') + 1);  // drop the second header
    const fs::path combined = root / "combined.csv";
    {
      std::ofstream out(combined, std::ios::binary);
      out << ekf_text << rts_text;
    }
    ScoreConfig score;
    score.solutions_path = combined.string();
    score.truth_path = (root / "data" / "ground_truth.csv").string();
    score.out_dir = (root / "score2").string();
    const ScoreSummary scored = run_score(score);
    REQUIRE_EQ(scored.methods.size(), 2);
    CHECK_EQ(scored.methods[0].method, "ekf");
    CHECK_EQ(scored.methods[1].method, "rts");
    // Smoothing should not score worse than the forward filter here.
    CHECK(scored.methods[1].score_m <= scored.methods[0].score_m);
  }

  fs::remove_all(root);
}

TEST_CASE("scoring rejects empty or all-invalid solution sets") {
  const fs::path root = fs::temp_directory_path() / "gnsspvt_pipeline_score_err";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path truth_path = root / "truth.csv";
  {
    std::ofstream out(truth_path);
    out << "utc_millis,lat_deg,lon_deg,alt_m\n1000,1.0,103.0,10\n2000,1.0,103.0,10\n";
  }
  const std::string header =
      "utc_millis,method,valid,lat_deg,lon_deg,alt_m,vel_east_mps,vel_north_mps,"
      "vel_up_mps,clock_offset_m,clock_drift_mps,fsm_state\n";

  SUBCASE("no rows at all") {
    const fs::path sol = root / "empty.csv";
    {
      std::ofstream out(sol);
      out << header;
    }
    ScoreConfig config{sol.string(), truth_path.string(), (root / "s").string()};
    CHECK_THROWS_AS(run_score(config), EmptyInputError);
  }
  SUBCASE("only invalid rows for a method") {
    const fs::path sol = root / "invalid.csv";
    {
      std::ofstream out(sol);
      out << header << "1000,wls,0,,,,,,,,,stop\n";
    }
    ScoreConfig config{sol.string(), truth_path.string(), (root / "s").string()};
    CHECK_THROWS_AS(run_score(config), EmptyInputError);
  }
  fs::remove_all(root);
}

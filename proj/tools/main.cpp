#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "gnsspvt/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;    // bad files, bad arguments, unsupported content
constexpr int kExitNumeric = 3;  // singular geometry, divergence, no solution

int run(int argc, char** argv) {
  CLI::App app{"GNSS positioning from Android raw measurements"};
  app.require_subcommand(1);

  // -- solve --
  auto* solve = app.add_subcommand("solve", "Estimate positions from a raw GNSS log");
  gnsspvt::SolveConfig solve_config;
  std::string method = "wls";
  double gap_s = 10.0, pr_jump_m = 50000.0;
  int hold_th = 10;
  std::string glonass_leap;
  bool unweighted_mhe = false;
  solve->add_option("--method", method, "Estimator: wls | mhe | ekf | rts")
      ->default_val("wls");
  solve->add_option("--log", solve_config.log_path, "Raw GNSS log file")->required();
  solve->add_option("--derived", solve_config.derived_path,
                    "Corrections CSV (satellite states and delay terms); epochs "
                    "without corrections are dropped");
  solve->add_option("--out", solve_config.out_dir, "Output directory")->required();
  solve->add_option("--window", solve_config.run.mhe_window,
                    "Estimation window length in epochs (mhe)")
      ->default_val(10);
  solve->add_option("--gap-s", gap_s, "Clock discontinuity threshold, seconds")
      ->default_val(10.0);
  solve->add_option("--pr-jump-m", pr_jump_m, "Pseudorange discontinuity threshold, meters")
      ->default_val(50000.0);
  solve->add_option("--hold-th", hold_th, "Max epochs the filter coasts through an outage")
      ->default_val(10);
  solve->add_flag("--unweighted-mhe", unweighted_mhe,
                  "Solve the window with unit weights instead of 1/sigma");
  solve->add_option("--glonass-leap-s", glonass_leap,
                    "Leap seconds for GLONASS time alignment (unset: GLONASS dropped)");

  // -- score --
  auto* score = app.add_subcommand("score", "Compare solutions against ground truth");
  gnsspvt::ScoreConfig score_config;
  std::string percentile_method = "linear";
  score->add_option("--solutions", score_config.solutions_path, "solutions CSV")->required();
  score->add_option("--truth", score_config.truth_path, "ground truth CSV")->required();
  score->add_option("--out", score_config.out_dir, "Output directory")->required();
  score->add_option("--percentile", percentile_method,
                    "Percentile rule: linear | nearest-rank")
      ->default_val("linear");

  // -- simulate --
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario");
  std::string sim_config_path, sim_out_dir;
  simulate->add_option("--config", sim_config_path, "Scenario JSON")->required();
  simulate->add_option("--out", sim_out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (solve->parsed()) {
      solve_config.method = gnsspvt::method_from_string(method);
      solve_config.run.thresholds.clock_gap_s = gap_s;
      solve_config.run.thresholds.pseudorange_jump_m = pr_jump_m;
      solve_config.run.hold_threshold = hold_th;
      solve_config.run.weighted_mhe = !unweighted_mhe;
      if (solve_config.run.mhe_window < 1) {
        throw gnsspvt::DomainError("--window must be at least 1");
      }
      if (!glonass_leap.empty()) {
        solve_config.run.transmit.glonass_leap_seconds = std::stod(glonass_leap);
      }
      const gnsspvt::SolveSummary summary = gnsspvt::run_solve(solve_config);
      for (const auto& [name, valid] : summary.valid_rows_by_method) {
        std::printf("%s: %zu valid epochs\n", name.c_str(), valid);
      }
      for (const auto& file : summary.written_files) {
        std::printf("wrote %s\n", file.c_str());
      }
    } else if (score->parsed()) {
      if (percentile_method == "linear") {
        score_config.percentile_method = gnsspvt::PercentileMethod::kLinearInterpolation;
      } else if (percentile_method == "nearest-rank") {
        score_config.percentile_method = gnsspvt::PercentileMethod::kNearestRank;
      } else {
        throw gnsspvt::DomainError("--percentile must be linear or nearest-rank");
      }
      const gnsspvt::ScoreSummary summary = gnsspvt::run_score(score_config);
      for (const auto& m : summary.methods) {
        std::printf("%s: score %.4f m (p50 %.4f, p95 %.4f, %zu matched, %zu dropped)\n",
                    m.method.c_str(), m.score_m, m.p50_m, m.p95_m, m.matched, m.dropped);
      }
      for (const auto& file : summary.written_files) {
        std::printf("wrote %s\n", file.c_str());
      }
    } else if (simulate->parsed()) {
      const gnsspvt::SimulateSummary summary =
          gnsspvt::run_simulate(sim_config_path, sim_out_dir);
      std::printf("simulated %zu epochs\n", summary.epochs);
      for (const auto& file : summary.written_files) {
        std::printf("wrote %s\n", file.c_str());
      }
    }
  } catch (const gnsspvt::NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  } catch (const gnsspvt::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }

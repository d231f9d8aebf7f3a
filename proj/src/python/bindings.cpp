#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gnsspvt/pipeline.hpp"

namespace py = pybind11;
using namespace gnsspvt;

namespace {

// Single-epoch solve with a plain array interface so callers don't have to
// build the C++ measurement structs.
py::dict solve_epoch(const Eigen::MatrixXd& sat_pos, const Eigen::MatrixXd& sat_vel,
                     const Eigen::VectorXd& rho_c, const Eigen::VectorXd& rho_dot_c,
                     const Eigen::VectorXd& sigma_rho, const Eigen::VectorXd& sigma_rho_dot,
                     std::optional<Eigen::Matrix<double, 8, 1>> init) {
  const Eigen::Index m = sat_pos.rows();
  if (sat_pos.cols() != 3 || sat_vel.rows() != m || sat_vel.cols() != 3 ||
      rho_c.size() != m || rho_dot_c.size() != m || sigma_rho.size() != m ||
      sigma_rho_dot.size() != m) {
    throw DomainError("solve_epoch: inconsistent input shapes");
  }
  EpochBatch epoch;
  for (Eigen::Index i = 0; i < m; ++i) {
    CorrectedMeasurement meas;
    meas.constellation = Constellation::kGps;
    meas.svid = static_cast<int>(i) + 1;
    meas.rho_c_m = rho_c[i];
    meas.rho_dot_c_mps = rho_dot_c[i];
    meas.sigma_rho_m = sigma_rho[i];
    meas.sigma_rho_dot_mps = sigma_rho_dot[i];
    meas.sat_pos_ecef = sat_pos.row(i).transpose();
    meas.sat_vel_ecef = sat_vel.row(i).transpose();
    epoch.measurements.push_back(meas);
  }
  const WlsSolution sol = wls_solve(epoch, init ? *init : StateVector::Zero());
  py::dict out;
  out["state"] = sol.state;
  out["covariance"] = sol.covariance;
  out["iterations"] = sol.diagnostics.iterations;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GNSS pseudorange positioning: raw measurements to smoothed tracks";

  m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;
  m.attr("NANOS_PER_WEEK") = kNanosPerWeek;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def("week_number_nanos", &week_number_nanos, py::arg("full_bias_nanos"),
        "Nanoseconds from the GPS epoch to the start of the current week.");
  m.def(
      "pseudorange_m",
      [](double receive_tow, double transmit_tow) {
        const PseudorangeResult r = pseudorange_m(receive_tow, transmit_tow);
        return py::make_tuple(r.meters, r.plausible);
      },
      py::arg("receive_tow_nanos"), py::arg("transmit_tow_nanos"),
      "(meters, plausible) from receive/transmit times of week in nanoseconds.");

  py::class_<GeodeticPos>(m, "GeodeticPos")
      .def(py::init<>())
      .def(py::init([](double lat, double lon, double alt) {
             return GeodeticPos{lat, lon, alt};
           }),
           py::arg("lat_deg"), py::arg("lon_deg"), py::arg("alt_m") = 0.0)
      .def_readwrite("lat_deg", &GeodeticPos::lat_deg)
      .def_readwrite("lon_deg", &GeodeticPos::lon_deg)
      .def_readwrite("alt_m", &GeodeticPos::alt_m)
      .def("__repr__", [](const GeodeticPos& p) {
        return "GeodeticPos(lat_deg=" + format_double(p.lat_deg) +
               ", lon_deg=" + format_double(p.lon_deg) +
               ", alt_m=" + format_double(p.alt_m) + ")";
      });

  m.def("ecef_to_geodetic", &ecef_to_geodetic, py::arg("ecef"));
  m.def("geodetic_to_ecef", &geodetic_to_ecef, py::arg("pos"));
  m.def("vincenty_distance", &vincenty_distance, py::arg("a"), py::arg("b"),
        "Geodesic surface distance on WGS-84, meters.");

  m.def(
      "horizontal_score",
      [](const std::vector<double>& errors, const std::string& method) {
        const PercentileMethod pm = method == "nearest-rank"
                                        ? PercentileMethod::kNearestRank
                                        : PercentileMethod::kLinearInterpolation;
        return horizontal_score(errors, pm);
      },
      py::arg("horizontal_errors"), py::arg("method") = "linear",
      "(P50 + P95) / 2 of the horizontal errors.");
  m.def(
      "percentile",
      [](std::vector<double> values, double q, const std::string& method) {
        const PercentileMethod pm = method == "nearest-rank"
                                        ? PercentileMethod::kNearestRank
                                        : PercentileMethod::kLinearInterpolation;
        return percentile(std::move(values), q, pm);
      },
      py::arg("values"), py::arg("q"), py::arg("method") = "linear");

  m.def("solve_epoch", &solve_epoch, py::arg("sat_pos_ecef"), py::arg("sat_vel_ecef"),
        py::arg("rho_c_m"), py::arg("rho_dot_c_mps"), py::arg("sigma_rho_m"),
        py::arg("sigma_rho_dot_mps"), py::arg("init") = std::nullopt,
        "Weighted least-squares position/velocity/clock solve for one epoch.\n"
        "Returns dict with 'state' [x,vx,y,vy,z,vz,dt,df], 'covariance', 'iterations'.");

  m.def(
      "solve",
      [](const std::string& method, const std::string& log_path,
         const std::string& derived_path, const std::string& out_dir, int window) {
        SolveConfig config;
        config.method = method_from_string(method);
        config.log_path = log_path;
        config.derived_path = derived_path;
        config.out_dir = out_dir;
        config.run.mhe_window = window;
        const SolveSummary summary = run_solve(config);
        py::dict out;
        for (const auto& [name, valid] : summary.valid_rows_by_method) {
          out[py::str(name)] = valid;
        }
        return py::make_tuple(out, summary.written_files);
      },
      py::arg("method"), py::arg("log_path"), py::arg("derived_path"),
      py::arg("out_dir"), py::arg("window") = 10,
      "Run an estimator over a raw log; returns (valid-rows-by-method, files).");

  m.def(
      "score",
      [](const std::string& solutions_path, const std::string& truth_path,
         const std::string& out_dir, const std::string& percentile_method) {
        ScoreConfig config;
        config.solutions_path = solutions_path;
        config.truth_path = truth_path;
        config.out_dir = out_dir;
        config.percentile_method = percentile_method == "nearest-rank"
                                       ? PercentileMethod::kNearestRank
                                       : PercentileMethod::kLinearInterpolation;
        const ScoreSummary summary = run_score(config);
        py::list methods;
        for (const MethodScore& s : summary.methods) {
          py::dict d;
          d["method"] = s.method;
          d["matched"] = s.matched;
          d["dropped"] = s.dropped;
          d["score_m"] = s.score_m;
          d["p50_m"] = s.p50_m;
          d["p95_m"] = s.p95_m;
          d["horizontal_mean_m"] = s.horizontal_mean_m;
          methods.append(d);
        }
        return py::make_tuple(methods, summary.written_files);
      },
      py::arg("solutions_path"), py::arg("truth_path"), py::arg("out_dir"),
      py::arg("percentile_method") = "linear",
      "Score solutions against ground truth; returns (per-method dicts, files).");

  m.def(
      "simulate",
      [](const std::string& config_path, const std::string& out_dir) {
        const SimulateSummary summary = run_simulate(config_path, out_dir);
        return py::make_tuple(summary.epochs, summary.written_files);
      },
      py::arg("config_path"), py::arg("out_dir"),
      "Generate a synthetic scenario; returns (epoch count, files).");
}

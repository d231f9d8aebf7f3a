#include "gnsspvt/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "gnsspvt/rawmeas.hpp"

namespace gnsspvt {

namespace {

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(strip(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_i64(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_f64(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

using HeaderMap = std::unordered_map<std::string, std::size_t>;

HeaderMap header_map(const std::vector<std::string>& fields) {
  HeaderMap map;
  for (std::size_t i = 0; i < fields.size(); ++i) map.emplace(fields[i], i);
  return map;
}

std::size_t require_column(const HeaderMap& map, const std::string& name,
                           const std::string& what) {
  auto it = map.find(name);
  if (it == map.end()) {
    throw FormatError(what + ": missing required column '" + name + "'");
  }
  return it->second;
}

}  // namespace

Constellation constellation_from_android(int code) {
  switch (code) {
    case 1: return Constellation::kGps;
    case 2: return Constellation::kSbas;
    case 3: return Constellation::kGlonass;
    case 4: return Constellation::kQzss;
    case 5: return Constellation::kBeidou;
    case 6: return Constellation::kGalileo;
    default: return Constellation::kUnknown;
  }
}

Constellation constellation_from_label(const std::string& label) {
  std::string up;
  up.reserve(label.size());
  for (char ch : label) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (up == "GPS") return Constellation::kGps;
  if (up == "SBAS") return Constellation::kSbas;
  if (up == "GLONASS" || up == "GLO") return Constellation::kGlonass;
  if (up == "QZSS") return Constellation::kQzss;
  if (up == "BEIDOU" || up == "BDS") return Constellation::kBeidou;
  if (up == "GALILEO" || up == "GAL") return Constellation::kGalileo;
  return Constellation::kUnknown;
}

std::string to_string(Constellation c) {
  switch (c) {
    case Constellation::kGps: return "GPS";
    case Constellation::kSbas: return "SBAS";
    case Constellation::kGlonass: return "GLONASS";
    case Constellation::kQzss: return "QZSS";
    case Constellation::kBeidou: return "BEIDOU";
    case Constellation::kGalileo: return "GALILEO";
    default: return "UNKNOWN";
  }
}

GnssLog parse_gnss_log(std::istream& in, const LogFilterOptions& opts) {
  GnssLog log;
  std::string line;
  bool have_header = false;
  HeaderMap cols;
  // Column indices resolved once from the header.
  std::size_t i_time = 0, i_full_bias = 0, i_bias = 0, i_offset = 0;
  std::size_t i_svid = 0, i_const = 0, i_rsv = 0, i_rsv_unc = 0, i_rate = 0, i_rate_unc = 0;
  std::optional<std::size_t> i_state, i_cn0;

  bool have_first_bias = false;
  std::int64_t first_full_bias = 0;
  double first_bias = 0.0;
  std::int64_t current_time = 0;
  std::int64_t max_time = 0;

  while (std::getline(in, line)) {
    ++log.stats.lines_total;
    line = strip(line);
    if (line.rfind("# Raw,", 0) == 0) {
      auto fields = split_csv(line.substr(2));  // drop "# "
      cols = header_map(fields);
      i_time = require_column(cols, "TimeNanos", "gnss log");
      i_full_bias = require_column(cols, "FullBiasNanos", "gnss log");
      i_bias = require_column(cols, "BiasNanos", "gnss log");
      i_offset = require_column(cols, "TimeOffsetNanos", "gnss log");
      i_svid = require_column(cols, "Svid", "gnss log");
      i_const = require_column(cols, "ConstellationType", "gnss log");
      i_rsv = require_column(cols, "ReceivedSvTimeNanos", "gnss log");
      i_rsv_unc = require_column(cols, "ReceivedSvTimeUncertaintyNanos", "gnss log");
      i_rate = require_column(cols, "PseudorangeRateMetersPerSecond", "gnss log");
      i_rate_unc = require_column(cols, "PseudorangeRateUncertaintyMetersPerSecond", "gnss log");
      if (auto it = cols.find("State"); it != cols.end()) i_state = it->second;
      if (auto it = cols.find("Cn0DbHz"); it != cols.end()) i_cn0 = it->second;
      have_header = true;
      continue;
    }
    if (line.rfind("Raw,", 0) != 0) continue;  // comments, Fix/Nav/etc records
    if (!have_header) {
      throw FormatError("gnss log: 'Raw,' record before '# Raw,' header");
    }

    auto fields = split_csv(line);
    if (fields.size() < cols.size()) {
      ++log.stats.records_skipped;
      continue;
    }

    RawMeasurement m;
    std::int64_t ival = 0;
    double fval = 0.0;
    int ccode = 0;
    bool ok = parse_i64(fields[i_time], m.time_nanos);
    ok = ok && parse_i64(fields[i_full_bias], m.full_bias_nanos);
    ok = ok && parse_f64(fields[i_bias].empty() ? "0" : fields[i_bias], m.bias_nanos);
    ok = ok && parse_f64(fields[i_offset].empty() ? "0" : fields[i_offset], m.time_offset_nanos);
    ok = ok && parse_i64(fields[i_svid], ival);
    if (ok) m.svid = static_cast<int>(ival);
    if (ok) {
      std::int64_t c = 0;
      ok = parse_i64(fields[i_const], c);
      ccode = static_cast<int>(c);
    }
    ok = ok && parse_i64(fields[i_rsv], m.received_sv_time_nanos);
    ok = ok && parse_i64(fields[i_rsv_unc], m.received_sv_time_uncertainty_nanos);
    ok = ok && parse_f64(fields[i_rate], m.pseudorange_rate_mps);
    ok = ok && parse_f64(fields[i_rate_unc], m.pseudorange_rate_uncertainty_mps);
    if (!ok) {
      ++log.stats.records_skipped;
      continue;
    }
    m.constellation = constellation_from_android(ccode);
    if (i_state && parse_i64(fields[*i_state], ival)) {
      m.state = static_cast<std::uint32_t>(ival);
    }
    if (i_cn0 && parse_f64(fields[*i_cn0], fval)) m.cn0_dbhz = fval;

    if (opts.require_state && (m.state & opts.state_mask) != opts.state_mask) {
      ++log.stats.records_skipped;
      continue;
    }

    if (!have_first_bias) {
      first_full_bias = m.full_bias_nanos;
      first_bias = m.bias_nanos;
      have_first_bias = true;
    }

    if (log.epochs.empty() || m.time_nanos != current_time) {
      if (m.time_nanos < max_time) {
        // Receiver clock ran backwards: drop the row rather than emit an
        // out-of-order epoch.
        ++log.stats.records_skipped;
        continue;
      }
      RawEpoch epoch;
      epoch.first_full_bias_nanos = first_full_bias;
      epoch.first_bias_nanos = first_bias;
      epoch.utc_millis = utc_millis_from_receive(m.time_nanos, m.time_offset_nanos,
                                                 first_full_bias, first_bias);
      log.epochs.push_back(std::move(epoch));
      current_time = m.time_nanos;
      max_time = m.time_nanos;
    }
    log.epochs.back().measurements.push_back(m);
    ++log.stats.records_parsed;
  }

  if (!have_header) throw FormatError("gnss log: no '# Raw,' header found");
  if (log.epochs.empty()) throw EmptyInputError("gnss log: no usable measurements");
  return log;
}

DerivedTable parse_derived_csv(std::istream& in) {
  DerivedTable table;
  std::string line;
  bool have_header = false;
  HeaderMap cols;
  std::size_t i_utc = 0, i_const = 0, i_svid = 0;
  std::size_t i_px = 0, i_py = 0, i_pz = 0, i_vx = 0, i_vy = 0, i_vz = 0;
  std::size_t i_cb = 0, i_cd = 0, i_iono = 0, i_tropo = 0, i_isrb = 0;

  while (std::getline(in, line)) {
    ++table.stats.lines_total;
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      cols = header_map(split_csv(line));
      i_utc = require_column(cols, "utc_millis", "derived csv");
      i_const = require_column(cols, "constellation", "derived csv");
      i_svid = require_column(cols, "svid", "derived csv");
      i_px = require_column(cols, "sat_pos_x_m", "derived csv");
      i_py = require_column(cols, "sat_pos_y_m", "derived csv");
      i_pz = require_column(cols, "sat_pos_z_m", "derived csv");
      i_vx = require_column(cols, "sat_vel_x_mps", "derived csv");
      i_vy = require_column(cols, "sat_vel_y_mps", "derived csv");
      i_vz = require_column(cols, "sat_vel_z_mps", "derived csv");
      i_cb = require_column(cols, "sat_clock_bias_m", "derived csv");
      i_cd = require_column(cols, "sat_clock_drift_mps", "derived csv");
      i_iono = require_column(cols, "iono_delay_m", "derived csv");
      i_tropo = require_column(cols, "tropo_delay_m", "derived csv");
      i_isrb = require_column(cols, "inter_signal_bias_m", "derived csv");
      have_header = true;
      continue;
    }

    auto fields = split_csv(line);
    if (fields.size() < cols.size()) {
      ++table.stats.records_skipped;
      continue;
    }
    DerivedCorrection c;
    std::int64_t ival = 0;
    bool ok = parse_i64(fields[i_utc], c.utc_millis);
    // Constellation accepted as Android code or label.
    if (ok) {
      std::int64_t code = 0;
      c.constellation = parse_i64(fields[i_const], code)
                            ? constellation_from_android(static_cast<int>(code))
                            : constellation_from_label(fields[i_const]);
    }
    ok = ok && parse_i64(fields[i_svid], ival);
    if (ok) c.svid = static_cast<int>(ival);
    ok = ok && parse_f64(fields[i_px], c.sat_pos_ecef.x());
    ok = ok && parse_f64(fields[i_py], c.sat_pos_ecef.y());
    ok = ok && parse_f64(fields[i_pz], c.sat_pos_ecef.z());
    ok = ok && parse_f64(fields[i_vx], c.sat_vel_ecef.x());
    ok = ok && parse_f64(fields[i_vy], c.sat_vel_ecef.y());
    ok = ok && parse_f64(fields[i_vz], c.sat_vel_ecef.z());
    ok = ok && parse_f64(fields[i_cb], c.sat_clock_bias_m);
    ok = ok && parse_f64(fields[i_cd], c.sat_clock_drift_mps);
    ok = ok && parse_f64(fields[i_iono], c.iono_delay_m);
    ok = ok && parse_f64(fields[i_tropo], c.tropo_delay_m);
    ok = ok && parse_f64(fields[i_isrb], c.inter_signal_bias_m);
    if (!ok) {
      ++table.stats.records_skipped;
      continue;
    }
    DerivedKey key{c.utc_millis, c.constellation, c.svid};
    auto [it, inserted] = table.by_key.insert_or_assign(key, c);
    (void)it;
    if (!inserted) ++table.stats.duplicates;
    ++table.stats.records_parsed;
  }
  if (!have_header) throw FormatError("derived csv: no header line");
  return table;
}

GroundTruth parse_ground_truth(std::istream& in) {
  GroundTruth truth;
  std::string line;
  bool have_header = false;
  HeaderMap cols;
  std::size_t i_utc = 0, i_lat = 0, i_lon = 0, i_alt = 0;

  while (std::getline(in, line)) {
    ++truth.stats.lines_total;
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      cols = header_map(split_csv(line));
      i_utc = require_column(cols, "utc_millis", "ground truth csv");
      i_lat = require_column(cols, "lat_deg", "ground truth csv");
      i_lon = require_column(cols, "lon_deg", "ground truth csv");
      i_alt = require_column(cols, "alt_m", "ground truth csv");
      have_header = true;
      continue;
    }
    auto fields = split_csv(line);
    if (fields.size() < cols.size()) {
      ++truth.stats.records_skipped;
      continue;
    }
    GroundTruthPoint p;
    bool ok = parse_i64(fields[i_utc], p.utc_millis);
    ok = ok && parse_f64(fields[i_lat], p.lat_deg);
    ok = ok && parse_f64(fields[i_lon], p.lon_deg);
    ok = ok && parse_f64(fields[i_alt], p.alt_m);
    if (!ok) {
      ++truth.stats.records_skipped;
      continue;
    }
    truth.points.push_back(p);
    ++truth.stats.records_parsed;
  }
  if (!have_header) throw FormatError("ground truth csv: no header line");
  if (truth.points.empty()) throw EmptyInputError("ground truth csv: no usable rows");
  std::stable_sort(truth.points.begin(), truth.points.end(),
                   [](const auto& a, const auto& b) { return a.utc_millis < b.utc_millis; });
  return truth;
}

}  // namespace gnsspvt

#include "cyclegame/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cyclegame/errors.hpp"

namespace cyclegame::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "not a number: '" + s + "'");
  }
}

long parse_long(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "not an integer: '" + s + "'");
  }
}

// Lines with their 1-based numbers, skipping blanks; comment lines are
// passed to `on_comment` without the leading '#'.
template <typename OnComment, typename OnLine>
void scan_lines(const std::string& text, OnComment on_comment, OnLine on_line) {
  std::istringstream is(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(is, raw)) {
    ++number;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      on_comment(trim(line.substr(1)), number);
      continue;
    }
    on_line(line, number);
  }
}

std::string schema_line(const char* tag) { return std::string("# schema=") + tag + "\n"; }

void expect_header(const std::string& line, const std::string& header, std::size_t number) {
  if (line != header) throw ParseError(number, "expected header '" + header + "', got '" + line + "'");
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trajectory_csv(const TimeSeries& series) {
  std::string out = schema_line(kTrajectorySchema);
  out += "t,x1,x2,x3,x4\n";
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const Vec4& x = series.samples[i];
    out += format_number(series.time(i));
    for (int k = 0; k < 4; ++k) out += "," + format_number(x[k]);
    out += "\n";
  }
  return out;
}

nlohmann::json trajectory_meta_json(const Trajectory& traj) {
  const auto& m = traj.meta();
  nlohmann::json j;
  j[kJsonSchemaKey] = kTrajectorySchema;
  j["source"] = m.source;
  j["a"] = m.a ? nlohmann::json(*m.a) : nlohmann::json(nullptr);
  j["model"] = m.model;
  j["noise"] = m.noise ? nlohmann::json(*m.noise) : nlohmann::json(nullptr);
  j["dt"] = traj.dt();
  j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
  j["drift_corrections"] = m.drift_corrections;
  j["n_samples"] = traj.size();
  return j;
}

void write_trajectory(const std::filesystem::path& csv_path, const Trajectory& traj) {
  write_text(csv_path, trajectory_csv(traj.series()));
  std::filesystem::path sidecar = csv_path;
  sidecar.replace_extension(".json");
  write_text(sidecar, trajectory_meta_json(traj).dump(2) + "\n");
}

TimeSeries parse_trajectory_csv(const std::string& text) {
  TimeSeries ts;
  bool header = false;
  std::vector<double> times;
  scan_lines(
      text, [](const std::string&, std::size_t) {},
      [&](const std::string& line, std::size_t n) {
        if (!header) {
          expect_header(line, "t,x1,x2,x3,x4", n);
          header = true;
          return;
        }
        const auto f = split_csv(line);
        if (f.size() != 5) throw ParseError(n, "expected 5 fields, got " + std::to_string(f.size()));
        times.push_back(parse_double(f[0], n));
        ts.samples.emplace_back(parse_double(f[1], n), parse_double(f[2], n), parse_double(f[3], n),
                                parse_double(f[4], n));
      });
  if (!header) throw ValidationError("trajectory file has no header");
  if (ts.samples.size() < 2) throw ValidationError("trajectory file needs at least 2 samples");
  ts.t0 = times.front();
  ts.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(ts.dt > 0.0)) throw ValidationError("trajectory times must increase");
  return ts;
}

TimeSeries read_trajectory(const std::filesystem::path& csv_path) {
  try {
    return parse_trajectory_csv(read_text(csv_path));
  } catch (const ParseError& e) {
    throw ValidationError(csv_path.string() + ": " + e.what());
  }
}

nlohmann::json spectrum_json(const Spectrum& s) {
  nlohmann::json j;
  j[kJsonSchemaKey] = "cyclegame.spectrum/1";
  j["source"] = s.source == JacobianSource::Analytic ? "analytic" : "numeric";
  j["diagonalizable"] = s.diagonalizable;
  j["max_residual"] = s.max_residual();
  nlohmann::json jac = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) row.push_back(s.jacobian(r, c));
    jac.push_back(row);
  }
  j["jacobian"] = jac;
  nlohmann::json values = nlohmann::json::array(), vectors = nlohmann::json::array();
  for (const auto& p : s.pairs) {
    values.push_back({p.value.real(), p.value.imag()});
    nlohmann::json v = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) v.push_back({p.vector[k].real(), p.vector[k].imag()});
    vectors.push_back(v);
  }
  j["eigenvalues"] = values;
  j["eigenvectors"] = vectors;
  return j;
}

std::string eigencycle_csv(const std::vector<EigencycleRow>& rows) {
  std::string out = schema_line(kEigencycleSchema);
  out += "a,s12,s13,s14,s23,s24,s34\n";
  for (const auto& r : rows) {
    out += format_number(r.a);
    for (double v : r.set.values) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

nlohmann::json ellipses_json(const std::vector<Ellipse>& ellipses, double a) {
  nlohmann::json j;
  j[kJsonSchemaKey] = "cyclegame.lissajous/1";
  j["a"] = a;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : ellipses) {
    nlohmann::json item;
    item["subspace"] = std::to_string(e.m + 1) + std::to_string(e.n + 1);
    item["sigma"] = e.sigma;
    item["orientation"] = e.orientation;
    item["signed_area"] = polygon_signed_area(e.vertices);
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : e.vertices) verts.push_back({v[0], v[1]});
    item["vertices"] = verts;
    list.push_back(item);
  }
  j["subspaces"] = list;
  return j;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = schema_line(kReportSchema);
  out += "source,a,L12,L13,L14,L23,L24,L34,axis1,axis3,axis2,n_samples\n";
  for (const auto& r : rows) {
    if (r.source.find(',') != std::string::npos) throw ValidationError("source label contains a comma");
    out += r.source + "," + format_number(r.a);
    for (double v : r.values) out += "," + format_number(v);
    for (double v : r.axis.components) out += "," + format_number(v);
    out += "," + std::to_string(r.n_samples) + "\n";
  }
  return out;
}

std::vector<ReportRow> parse_report_csv(const std::string& text) {
  std::vector<ReportRow> rows;
  bool header = false;
  scan_lines(
      text, [](const std::string&, std::size_t) {},
      [&](const std::string& line, std::size_t n) {
        if (!header) {
          expect_header(line, "source,a,L12,L13,L14,L23,L24,L34,axis1,axis3,axis2,n_samples", n);
          header = true;
          return;
        }
        const auto f = split_csv(line);
        if (f.size() != 12) throw ParseError(n, "expected 12 fields, got " + std::to_string(f.size()));
        ReportRow r;
        r.source = f[0];
        if (r.source.empty()) throw ParseError(n, "empty source label");
        r.a = parse_double(f[1], n);
        for (int i = 0; i < 6; ++i) r.values[i] = parse_double(f[2 + i], n);
        for (int i = 0; i < 3; ++i) r.axis.components[i] = parse_double(f[8 + i], n);
        const long count = parse_long(f[11], n);
        if (count < 0) throw ParseError(n, "negative n_samples");
        r.n_samples = static_cast<std::size_t>(count);
        rows.push_back(std::move(r));
      });
  if (!header) throw ValidationError("report file has no header");
  return rows;
}

std::string session_csv(const std::vector<SessionRecord>& sessions) {
  std::string out = schema_line(kSessionSchema);
  if (!sessions.empty()) {
    bool shared = true;
    for (const auto& s : sessions) shared = shared && s.a == sessions.front().a;
    if (shared) out += "# a=" + format_number(sessions.front().a) + "\n";
  }
  out += "session_id,period,n1,n2,n3,n4\n";
  for (const auto& s : sessions) {
    if (s.session_id.find(',') != std::string::npos) throw ValidationError("session id contains a comma");
    for (std::size_t p = 0; p < s.periods.size(); ++p) {
      const auto& c = s.periods[p];
      out += s.session_id + "," + std::to_string(p + 1) + "," + std::to_string(c[0]) + "," + std::to_string(c[1]) +
             "," + std::to_string(c[2]) + "," + std::to_string(c[3]) + "\n";
    }
  }
  return out;
}

std::vector<SessionRecord> parse_session_csv(const std::string& text, double default_a) {
  double a = default_a;
  bool header = false;
  std::vector<SessionRecord> sessions;
  std::map<std::string, std::size_t> index;
  std::map<std::string, long> last_period;
  scan_lines(
      text,
      [&](const std::string& comment, std::size_t n) {
        if (comment.rfind("a=", 0) == 0) a = parse_double(trim(comment.substr(2)), n);
      },
      [&](const std::string& line, std::size_t n) {
        if (!header) {
          expect_header(line, "session_id,period,n1,n2,n3,n4", n);
          header = true;
          return;
        }
        const auto f = split_csv(line);
        if (f.size() != 6) throw ParseError(n, "expected 6 fields, got " + std::to_string(f.size()));
        if (f[0].empty()) throw ParseError(n, "empty session id");
        const long period = parse_long(f[1], n);
        std::array<int, 4> counts{};
        int total = 0;
        for (int k = 0; k < 4; ++k) {
          const long c = parse_long(f[2 + k], n);
          if (c < 0) throw ParseError(n, "negative strategy count");
          counts[k] = static_cast<int>(c);
          total += counts[k];
        }
        auto it = index.find(f[0]);
        if (it == index.end()) {
          if (total <= 0) throw ParseError(n, "session population must be positive");
          it = index.emplace(f[0], sessions.size()).first;
          SessionRecord rec;
          rec.session_id = f[0];
          rec.population_size = total;
          sessions.push_back(std::move(rec));
          last_period[f[0]] = 0;
        }
        SessionRecord& rec = sessions[it->second];
        if (total != rec.population_size) {
          throw ParseError(n, "counts sum to " + std::to_string(total) + " but session " + rec.session_id +
                                  " has population " + std::to_string(rec.population_size));
        }
        if (period <= last_period[f[0]]) throw ParseError(n, "periods must increase within a session");
        last_period[f[0]] = period;
        rec.periods.push_back(counts);
      });
  if (!header) throw ValidationError("session file has no header");
  if (!(a > 0.0)) throw ValidationError("session file carries no treatment a; pass one explicitly");
  for (auto& s : sessions) s.a = a;
  return sessions;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  scan_lines(
      text, [](const std::string&, std::size_t) {},
      [&](const std::string& line, std::size_t n) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(n, "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(n, "empty key");
        out[key] = trim(line.substr(eq + 1));
      });
  return out;
}

}  // namespace cyclegame::io

#include "cyclegame/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "cyclegame/errors.hpp"
#include "cyclegame/rng.hpp"

namespace cyclegame::cli {

namespace fs = std::filesystem;
using io::format_number;
using io::ReportRow;

namespace {

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError(key + ": not a number: '" + v + "'");
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ValidationError(key + ": not an integer: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(key + ": expected true or false");
}

std::string a_tag(double a) { return "a" + format_number(a); }

// Unit-inf tangent direction of the principal mode's real part.
Vec4 mode_direction(const EigenPair& mode) {
  Vec4 d = mode.vector.real();
  d.array() -= d.mean();
  const double scale = d.lpNorm<Eigen::Infinity>();
  if (!(scale > 0.0)) throw NumericalError("principal mode has no real tangent component");
  return d / scale;
}

Vec4 origin_for(const RunConfig& cfg, const TimeSeries& ts, const Vec4& rest) {
  return cfg.origin == Origin::Mean ? empirical_mean(ts) : rest;
}

ReportRow measure_row(const std::string& source, double a, const TimeSeries& ts, const Vec4& origin) {
  const AngularMomentumSet set = angular_momentum_set(ts, origin);
  return {source, a, set.values, rotation_axis(ts, origin), ts.size()};
}

std::vector<double> as_vector(const Set6& s) { return {s.begin(), s.end()}; }
std::vector<double> as_vector(const AxisVector& v) { return {v.components.begin(), v.components.end()}; }

bool degenerate(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

fs::path write(const fs::path& path, const std::string& content, std::vector<fs::path>& written) {
  io::write_text(path, content);
  written.push_back(path);
  return path;
}

std::string fixed(double v, int width = 8, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << std::setw(width) << v;
  return s.str();
}

std::string matrix_text(const std::string& title, const CorrelationMatrix& m) {
  std::ostringstream s;
  s << title << "  (* below " << format_number(m.flag_threshold) << ")\n";
  std::size_t w = 6;
  for (const auto& l : m.labels) w = std::max(w, l.size() + 1);
  s << std::string(w, ' ');
  for (const auto& l : m.labels) s << std::setw(static_cast<int>(w) + 2) << l;
  s << "\n";
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    s << std::left << std::setw(static_cast<int>(w)) << m.labels[i] << std::right;
    for (std::size_t j = 0; j < m.labels.size(); ++j) {
      s << std::setw(static_cast<int>(w) + 1) << std::fixed << std::setprecision(3) << m.rho[i][j]
        << (m.flagged(i, j) ? '*' : ' ');
    }
    s << "\n";
  }
  return s.str();
}

nlohmann::json matrix_json(const CorrelationMatrix& m) {
  nlohmann::json flags = nlohmann::json::array();
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.labels.size(); ++j) row.push_back(m.flagged(i, j));
    flags.push_back(row);
  }
  return {{"labels", m.labels}, {"rho", m.rho}, {"flagged", flags}, {"threshold", m.flag_threshold}};
}

bool is_session_row(const std::string& source) { return source.rfind("E:", 0) == 0; }

}  // namespace

void RunConfig::validate() const {
  if (a_values.empty()) throw ValidationError("at least one treatment a is required");
  for (double a : a_values) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("treatment a must be positive, got " + format_number(a));
  }
  if (noise && !(*noise > 0.0)) throw ValidationError("noise must be positive");
  if (steps < 1 || ticks < 1 || periods < 2) throw ValidationError("steps, ticks must be >= 1 and periods >= 2");
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (sessions < 0) throw ValidationError("sessions must be >= 0");
  if (players < 2 || players % 2 != 0) throw ValidationError("players must be even and >= 2");
  if (window < 1) throw ValidationError("window must be >= 1");
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  if (!(perturbation > 0.0) || !(amplitude > 0.0) || !(orbit_periods > 0.0)) {
    throw ValidationError("perturbation, amplitude and orbit periods must be positive");
  }
  if (sweep_count < 0 || (sweep_count > 0 && !(sweep_min > 0.0 && sweep_max > sweep_min))) {
    throw ValidationError("sweep range must satisfy 0 < min < max");
  }
  if (!(flag_threshold >= -1.0 && flag_threshold <= 1.0)) throw ValidationError("flag threshold must lie in [-1, 1]");
  if (out.empty()) throw ValidationError("output directory is empty");
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "a") {
    cfg.a_values.clear();
    for (const auto& item : split_list(value)) cfg.a_values.push_back(to_double(key, item));
  } else if (key == "model") {
    cfg.models = split_list(value);
  } else if (key == "protocol") {
    cfg.protocols = split_list(value);
  } else if (key == "noise") {
    cfg.noise = to_double(key, value);
  } else if (key == "logit-convention") {
    if (value == "temperature") cfg.convention = LogitConvention::Temperature;
    else if (value == "gain") cfg.convention = LogitConvention::Gain;
    else throw ValidationError("logit-convention must be temperature or gain");
  } else if (key == "origin") {
    if (value == "fixed-point") cfg.origin = Origin::FixedPoint;
    else if (value == "mean") cfg.origin = Origin::Mean;
    else throw ValidationError("origin must be fixed-point or mean");
  } else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw ValidationError("seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "steps") {
    cfg.steps = static_cast<long>(to_integer(key, value));
  } else if (key == "dt") {
    cfg.dt = to_double(key, value);
  } else if (key == "ticks") {
    cfg.ticks = static_cast<long>(to_integer(key, value));
  } else if (key == "sessions") {
    cfg.sessions = static_cast<int>(to_integer(key, value));
  } else if (key == "periods") {
    cfg.periods = static_cast<int>(to_integer(key, value));
  } else if (key == "players") {
    cfg.players = static_cast<int>(to_integer(key, value));
  } else if (key == "window") {
    cfg.window = static_cast<int>(to_integer(key, value));
  } else if (key == "temperature") {
    cfg.temperature = to_double(key, value);
  } else if (key == "perturbation") {
    cfg.perturbation = to_double(key, value);
  } else if (key == "amplitude") {
    cfg.amplitude = to_double(key, value);
  } else if (key == "orbit-periods") {
    cfg.orbit_periods = to_double(key, value);
  } else if (key == "sweep-min") {
    cfg.sweep_min = to_double(key, value);
  } else if (key == "sweep-max") {
    cfg.sweep_max = to_double(key, value);
  } else if (key == "sweep-count") {
    cfg.sweep_count = static_cast<int>(to_integer(key, value));
  } else if (key == "flag-threshold") {
    cfg.flag_threshold = to_double(key, value);
  } else if (key == "write-trajectories") {
    cfg.write_trajectories = to_bool(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "input") {
    cfg.inputs.clear();
    for (const auto& item : split_list(value)) cfg.inputs.emplace_back(item);
  } else {
    throw ValidationError("unknown setting '" + raw_key + "'");
  }
}

RunConfig load_config(const fs::path& path) {
  RunConfig cfg;
  for (const auto& [k, v] : io::parse_key_values(io::read_text(path))) apply_setting(cfg, k, v);
  return cfg;
}

DynamicsModel resolve_model(const std::string& label, const RunConfig& cfg) {
  if (label == "replicator") return DynamicsModel::replicator();
  if (label == "ms-replicator") return DynamicsModel::ms_replicator();
  if (label == "logit") {
    if (!cfg.noise) throw ValidationError("model 'logit' needs --noise");
    return DynamicsModel::logit(*cfg.noise, cfg.convention);
  }
  return theory_model(label, cfg.convention);
}

AbmConfig resolve_protocol(const std::string& label, const RunConfig& cfg) {
  if (label == "logit") {
    if (!cfg.noise) throw ValidationError("protocol 'logit' needs --noise");
    AbmConfig c;
    c.decision = DecisionMethod::Logit;
    c.noise = *cfg.noise;
    c.convention = cfg.convention;
    return c;
  }
  return abm_protocol(label, cfg.convention);
}

DynamicsModel protocol_model(const std::string& label, const RunConfig& cfg) {
  const AbmConfig c = resolve_protocol(label, cfg);
  switch (c.decision) {
    case DecisionMethod::PairwiseDifference: return DynamicsModel::replicator();
    case DecisionMethod::PositiveProportional: return DynamicsModel::ms_replicator();
    case DecisionMethod::Logit: return DynamicsModel::logit(c.noise, c.convention);
  }
  return DynamicsModel::replicator();
}

Trajectory superplane_orbit(const GameSpec& g, double amplitude, double periods, int samples_per_period) {
  if (!(amplitude > 0.0) || !(periods > 0.0) || samples_per_period < 4) {
    throw ValidationError("orbit needs positive amplitude and periods");
  }
  const TheoryResult th = theory_eigencycles(DynamicsModel::replicator(), g);
  const Vec4 start = th.rest_point.vec() + amplitude * mode_direction(th.mode);
  const double period = 2.0 * std::numbers::pi / th.mode.value.imag();
  const double dt = period / samples_per_period;
  const auto steps = static_cast<long>(std::llround(periods * samples_per_period));
  return integrate(DynamicsModel::replicator(), g, SimplexState(start), dt, steps);
}

ReportRow pool_rows(const std::vector<ReportRow>& rows, const std::string& source) {
  if (rows.empty()) throw ValidationError("nothing to pool for " + source);
  ReportRow out{source, rows.front().a, {}, {}, 0};
  double weight = 0.0;
  for (const auto& r : rows) {
    if (r.n_samples < 2) continue;
    const double w = static_cast<double>(r.n_samples - 1);
    for (int i = 0; i < 6; ++i) out.values[i] += w * r.values[i];
    for (int i = 0; i < 3; ++i) out.axis.components[i] += w * r.axis.components[i];
    weight += w;
    out.n_samples += r.n_samples;
  }
  if (!(weight > 0.0)) throw ValidationError("rows for " + source + " carry no transitions");
  for (double& v : out.values) v /= weight;
  for (double& v : out.axis.components) v /= weight;
  return out;
}

CompareResult compare_rows(const std::vector<ReportRow>& rows, double flag_threshold) {
  if (rows.empty()) throw ValidationError("compare: no input rows");
  std::map<std::string, std::vector<const ReportRow*>> by_a;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    const std::string key = format_number(r.a);
    if (!by_a.count(key)) order.push_back(key);
    by_a[key].push_back(&r);
  }

  nlohmann::json treatments = nlohmann::json::array();
  std::ostringstream text;
  std::vector<double> pooled_x14, pooled_y14, pooled_x12, pooled_y12;

  for (const auto& key : order) {
    const auto& group = by_a[key];
    nlohmann::json t;
    t["a"] = group.front()->a;
    text << "== a = " << key << " ==\n";

    std::vector<LabeledVector> sets, axes;
    nlohmann::json skipped = nlohmann::json::array();
    const ReportRow* theory = nullptr;
    std::vector<const ReportRow*> sessions;
    for (const ReportRow* r : group) {
      if (is_session_row(r->source)) {
        sessions.push_back(r);
        continue;
      }
      if (r->source == "T1") theory = r;
      const auto v = as_vector(r->values);
      if (degenerate(v)) {
        skipped.push_back(r->source);
        continue;
      }
      sets.push_back({r->source, v});
      const auto ax = as_vector(r->axis);
      if (!degenerate(ax)) axes.push_back({r->source, ax});
    }
    t["skipped_degenerate"] = skipped;

    if (!sets.empty()) {
      const auto m = correlation_matrix(sets, flag_threshold);
      t["eigencycle_corr"] = matrix_json(m);
      text << matrix_text("eigencycle correlation (n=6)", m) << "\n";
    }
    if (!axes.empty()) {
      const auto m = correlation_matrix(axes, flag_threshold);
      t["axis_corr"] = matrix_json(m);
      text << matrix_text("rotation axis correlation (n=3)", m) << "\n";
    }

    // Identity residuals on unit sets.
    nlohmann::json ids = nlohmann::json::array();
    text << "identity residuals (unit sets): s24, s14+s34, s12-s23\n";
    for (const ReportRow* r : group) {
      if (degenerate(as_vector(r->values))) continue;
      const EigencycleSet u{normalize_set(r->values), EigencycleSet::Normalization::Unit};
      const auto res = invariant_identities(u);
      ids.push_back({{"source", r->source}, {"s24", res[0]}, {"s14_plus_s34", res[1]}, {"s12_minus_s23", res[2]}});
      text << "  " << std::left << std::setw(14) << r->source << std::right << fixed(res[0]) << fixed(res[1])
           << fixed(res[2]) << "\n";
    }
    t["identities"] = ids;

    // Regression of measured unit sets on the T1 unit set.
    nlohmann::json regs = nlohmann::json::array();
    if (theory && !degenerate(as_vector(theory->values))) {
      const Set6 x = normalize_set(theory->values);
      text << "\nOLS vs T1 (unit sets): slope intercept p\n";
      for (const ReportRow* r : group) {
        if (r == theory || is_session_row(r->source) || r->source.rfind("T", 0) == 0) continue;
        if (degenerate(as_vector(r->values))) continue;
        const Set6 y = normalize_set(r->values);
        const OlsResult fit = ols_fit(x, y);
        regs.push_back({{"source", r->source}, {"slope", fit.slope}, {"intercept", fit.intercept},
                        {"p_value", fit.p_value}, {"r", fit.r}});
        text << "  " << std::left << std::setw(14) << r->source << std::right << fixed(fit.slope)
             << fixed(fit.intercept) << fixed(fit.p_value) << "\n";
      }
    }
    t["regressions"] = regs;

    // Per-session statistics.
    if (!sessions.empty()) {
      std::vector<double> s24, s14p34, s12m23, x14, y14, x12, y12;
      for (const ReportRow* r : sessions) {
        const EigencycleSet e{r->values, EigencycleSet::Normalization::Raw};
        const auto res = invariant_identities(e);
        s24.push_back(res[0]);
        s14p34.push_back(res[1]);
        s12m23.push_back(res[2]);
        x14.push_back(-e.at(2, 3));
        y14.push_back(e.at(0, 3));
        x12.push_back(e.at(1, 2));
        y12.push_back(e.at(0, 1));
      }
      pooled_x14.insert(pooled_x14.end(), x14.begin(), x14.end());
      pooled_y14.insert(pooled_y14.end(), y14.begin(), y14.end());
      pooled_x12.insert(pooled_x12.end(), x12.begin(), x12.end());
      pooled_y12.insert(pooled_y12.end(), y12.begin(), y12.end());
      nlohmann::json tests = nlohmann::json::array();
      text << "\nsession t-tests against zero (n=" << sessions.size() << "): t p\n";
      const std::pair<const char*, std::vector<double>*> named[] = {
          {"s24", &s24}, {"s14_plus_s34", &s14p34}, {"s12_minus_s23", &s12m23}};
      for (const auto& [name, samples] : named) {
        if (samples->size() < 2) break;
        try {
          const TTestResult tt = ttest_zero(*samples);
          tests.push_back({{"identity", name}, {"t", tt.t_stat}, {"p_value", tt.p_value}, {"n", tt.n},
                           {"mean", tt.mean}});
          text << "  " << std::left << std::setw(14) << name << std::right << fixed(tt.t_stat) << fixed(tt.p_value)
               << "\n";
        } catch (const ValidationError& e) {
          tests.push_back({{"identity", name}, {"error", e.what()}});
        }
      }
      t["ttests"] = tests;
      t["scatter"] = {{"s14_vs_minus_s34", {{"x", x14}, {"y", y14}}}, {"s12_vs_s23", {{"x", x12}, {"y", y12}}}};
    }
    text << "\n";
    treatments.push_back(t);
  }

  nlohmann::json out{{io::kJsonSchemaKey, "cyclegame.compare/1"}, {"treatments", treatments}};
  if (pooled_x14.size() >= 3) {
    nlohmann::json fits;
    try {
      const OlsResult f14 = ols_fit(pooled_x14, pooled_y14);
      const OlsResult f12 = ols_fit(pooled_x12, pooled_y12);
      fits = {{"s14_vs_minus_s34", {{"slope", f14.slope}, {"intercept", f14.intercept}, {"p_value", f14.p_value}}},
              {"s12_vs_s23", {{"slope", f12.slope}, {"intercept", f12.intercept}, {"p_value", f12.p_value}}},
              {"n", pooled_x14.size()}};
      text << "pooled identity-line fits (n=" << pooled_x14.size() << "): s14 vs -s34 slope " << fixed(f14.slope)
           << ", s12 vs s23 slope " << fixed(f12.slope) << "\n";
    } catch (const ValidationError& e) {
      fits = {{"error", e.what()}};
    }
    out["identity_line_fits"] = fits;
  }
  return {out, text.str()};
}

std::vector<fs::path> cmd_theory(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.models.empty()) throw ValidationError("theory: empty model list");
  const fs::path dir = cfg.out / "theory";
  std::vector<fs::path> written;
  std::vector<ReportRow> report;
  std::map<std::string, std::vector<io::EigencycleRow>> per_model;
  for (double a : cfg.a_values) {
    const GameSpec g = make_game(a);
    for (const auto& label : cfg.models) {
      const DynamicsModel model = resolve_model(label, cfg);
      const TheoryResult th = theory_eigencycles(model, g);
      nlohmann::json spec = io::spectrum_json(th.spectrum);
      spec["a"] = a;
      spec["model"] = label;
      spec["rest_point"] = std::vector<double>(th.rest_point.vec().data(), th.rest_point.vec().data() + 4);
      write(dir / ("spectrum_" + label + "_" + a_tag(a) + ".json"), spec.dump(2) + "\n", written);
      write(dir / ("lissajous_" + label + "_" + a_tag(a) + ".json"),
            io::ellipses_json(lissajous_geometry(th.mode, 360), a).dump() + "\n", written);
      per_model[label].push_back({a, th.raw});
      const LinearizedMeasurement lm = measure_linearized(th.spectrum, cfg.perturbation, cfg.orbit_periods);
      AxisVector axis = lm.axis;
      const double n = axis.norm();
      if (n > 0.0) {
        for (double& c : axis.components) c /= n;
      }
      report.push_back({label, a, th.unit.values, axis, 0});
    }
  }
  for (const auto& label : cfg.models) {
    write(dir / ("eigencycles_" + label + ".csv"), io::eigencycle_csv(per_model[label]), written);
  }
  write(dir / "theory_report.csv", io::report_csv(report), written);
  return written;
}

std::vector<fs::path> cmd_simulate(const RunConfig& cfg) {
  cfg.validate();
  const fs::path dir = cfg.out / "simulate";
  std::vector<fs::path> written;
  std::vector<ReportRow> report;
  for (double a : cfg.a_values) {
    const GameSpec g = make_game(a);
    const Vec4 nash = nash_equilibrium(g).vec();

    for (const auto& label : cfg.models) {
      const DynamicsModel model = resolve_model(label, cfg);
      try {
        const TheoryResult th = theory_eigencycles(model, g);
        const Vec4 start = th.rest_point.vec() + cfg.amplitude * mode_direction(th.mode);
        Trajectory traj = integrate(model, g, SimplexState::project(start), cfg.dt, cfg.steps);
        traj.meta().model = label;
        if (cfg.write_trajectories) {
          const fs::path p = dir / ("ode_" + label + "_" + a_tag(a) + ".csv");
          io::write_trajectory(p, traj);
          written.push_back(p);
        }
        report.push_back(measure_row("ode:" + label, a, traj.series(), origin_for(cfg, traj.series(), th.rest_point.vec())));
      } catch (const NumericalError& e) {
        throw NumericalError("ode:" + label + " at a=" + format_number(a) + ": " + e.what());
      }
    }

    for (const auto& label : cfg.protocols) {
      AbmConfig c = resolve_protocol(label, cfg);
      c.seed = derive_seed(cfg.seed, "abm/" + label + "/" + a_tag(a));
      try {
        Trajectory traj = simulate_abm(g, c, cfg.ticks);
        traj.meta().model = label;
        if (cfg.write_trajectories) {
          const fs::path p = dir / ("abm_" + label + "_" + a_tag(a) + ".csv");
          io::write_trajectory(p, traj);
          written.push_back(p);
        }
        const Vec4 rest = fixed_point(protocol_model(label, cfg), g, nash_equilibrium(g)).vec();
        report.push_back(measure_row(label, a, traj.series(), origin_for(cfg, traj.series(), rest)));
      } catch (const NumericalError& e) {
        throw NumericalError(label + " at a=" + format_number(a) + ": " + e.what());
      }
    }

    if (cfg.sessions > 0) {
      std::vector<SessionRecord> records;
      std::vector<ReportRow> rows;
      for (int s = 0; s < cfg.sessions; ++s) {
        SessionConfig sc;
        sc.n_players = cfg.players;
        sc.periods = cfg.periods;
        sc.window = cfg.window;
        sc.temperature = cfg.temperature;
        sc.seed = derive_seed(cfg.seed, "session/" + a_tag(a) + "/" + std::to_string(s + 1));
        records.push_back(simulate_session(g, sc, a_tag(a) + "-s" + std::to_string(s + 1)));
        const Trajectory traj = session_trajectory(records.back());
        rows.push_back(measure_row("E:" + records.back().session_id, a, traj.series(),
                                   origin_for(cfg, traj.series(), nash)));
      }
      write(dir / ("sessions_" + a_tag(a) + ".csv"), io::session_csv(records), written);
      report.insert(report.end(), rows.begin(), rows.end());
      report.push_back(pool_rows(rows, "E"));
    }
  }
  write(dir / "simulate_report.csv", io::report_csv(report), written);
  return written;
}

std::vector<fs::path> cmd_ingest(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.inputs.empty()) throw ValidationError("ingest: no session files given");
  const double default_a =
      cfg.a_values.size() == 1 ? cfg.a_values.front() : std::numeric_limits<double>::quiet_NaN();
  const fs::path dir = cfg.out / "ingest";
  std::vector<fs::path> written;
  std::vector<ReportRow> report;
  for (const auto& input : cfg.inputs) {
    std::vector<SessionRecord> records;
    try {
      records = io::parse_session_csv(io::read_text(input), default_a);
    } catch (const ValidationError& e) {
      throw ValidationError(input.string() + ": " + e.what());
    }
    std::map<std::string, std::vector<ReportRow>> per_a;
    for (const auto& rec : records) {
      rec.validate();
      const Trajectory traj = session_trajectory(rec);
      if (cfg.write_trajectories) {
        const fs::path p = dir / (input.stem().string() + "_" + rec.session_id + ".csv");
        io::write_trajectory(p, traj);
        written.push_back(p);
      }
      const Vec4 nash = nash_equilibrium(make_game(rec.a)).vec();
      const ReportRow row = measure_row("E:" + rec.session_id, rec.a, traj.series(), origin_for(cfg, traj.series(), nash));
      report.push_back(row);
      per_a[format_number(rec.a)].push_back(row);
    }
    for (const auto& [key, rows] : per_a) report.push_back(pool_rows(rows, "E"));
  }
  write(dir / "ingest_report.csv", io::report_csv(report), written);
  return written;
}

std::vector<fs::path> cmd_measure(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.inputs.empty()) throw ValidationError("measure: no trajectory files given");
  std::vector<fs::path> written;
  std::vector<ReportRow> report;
  for (const auto& input : cfg.inputs) {
    TimeSeries ts;
    try {
      ts = io::read_trajectory(input);
    } catch (const ValidationError& e) {
      throw ValidationError(input.string() + ": " + e.what());
    }
    double a = cfg.a_values.front();
    std::optional<DynamicsModel> model;
    fs::path sidecar = input;
    sidecar.replace_extension(".json");
    if (fs::exists(sidecar)) {
      const auto meta = nlohmann::json::parse(io::read_text(sidecar), nullptr, false);
      if (meta.is_discarded()) throw ValidationError(sidecar.string() + ": malformed metadata");
      if (meta.contains("a") && meta["a"].is_number()) a = meta["a"].get<double>();
      if (meta.contains("model") && meta["model"].is_string()) {
        const std::string label = meta["model"].get<std::string>();
        try {
          model = resolve_model(label, cfg);
        } catch (const ValidationError&) {
          try {
            model = protocol_model(label, cfg);
          } catch (const ValidationError&) {
            // Free-form model names fall back to the Nash origin.
          }
        }
      }
    }
    const GameSpec g = make_game(a);
    Vec4 rest = nash_equilibrium(g).vec();
    if (model) rest = fixed_point(*model, g, nash_equilibrium(g)).vec();
    report.push_back(measure_row(input.stem().string(), a, ts, origin_for(cfg, ts, rest)));
  }
  write(cfg.out / "measure" / "measure_report.csv", io::report_csv(report), written);
  return written;
}

std::vector<fs::path> cmd_compare(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.inputs.empty()) throw ValidationError("compare: no report files given");
  std::vector<std::string> missing;
  for (const auto& p : cfg.inputs) {
    if (!fs::exists(p)) missing.push_back(p.string());
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw ValidationError("compare: missing inputs: " + list);
  }
  std::vector<ReportRow> rows;
  for (const auto& p : cfg.inputs) {
    try {
      const auto part = io::parse_report_csv(io::read_text(p));
      rows.insert(rows.end(), part.begin(), part.end());
    } catch (const ValidationError& e) {
      throw ValidationError(p.string() + ": " + e.what());
    }
  }
  const CompareResult result = compare_rows(rows, cfg.flag_threshold);
  std::vector<fs::path> written;
  write(cfg.out / "compare" / "compare.json", result.json.dump(2) + "\n", written);
  write(cfg.out / "compare" / "compare.txt", result.text, written);
  return written;
}

std::vector<fs::path> cmd_manifold(const RunConfig& cfg) {
  cfg.validate();
  const fs::path dir = cfg.out / "manifold";
  std::vector<fs::path> written;
  nlohmann::json summary{{io::kJsonSchemaKey, "cyclegame.manifold/1"}, {"amplitude", cfg.amplitude}};
  nlohmann::json rows = nlohmann::json::array();
  for (double a : cfg.a_values) {
    const Trajectory orbit = superplane_orbit(make_game(a), cfg.amplitude, 1.0);
    if (cfg.write_trajectories) {
      const fs::path p = dir / ("orbit_" + a_tag(a) + ".csv");
      io::write_trajectory(p, orbit);
      written.push_back(p);
    }
    nlohmann::json projections = nlohmann::json::array();
    for (const auto& [m, n] : kSubspaces) {
      std::vector<double> xm, xn;
      for (const auto& x : orbit.samples()) {
        xm.push_back(x[m]);
        xn.push_back(x[n]);
      }
      projections.push_back({{"m", m + 1}, {"n", n + 1}, {"residual", line_fit_residual(orbit.series(), m, n)},
                             {"x_m", xm}, {"x_n", xn}});
    }
    write(dir / ("projections_" + a_tag(a) + ".json"),
          nlohmann::json{{io::kJsonSchemaKey, "cyclegame.projections/1"}, {"a", a}, {"pairs", projections}}.dump() +
              "\n",
          written);
    const double r24 = line_fit_residual(orbit.series(), 1, 3);
    if (!(r24 > 1e-14)) {
      std::fprintf(stderr, "warning: a=%s: (x2,x4) residual is zero; the orbit is degenerate\n",
                   format_number(a).c_str());
    }
    rows.push_back({{"a", a}, {"residual_x2_x4", r24}});
  }
  summary["treatments"] = rows;
  write(dir / "manifold.json", summary.dump(2) + "\n", written);
  return written;
}

std::vector<fs::path> cmd_sweep(const RunConfig& cfg) {
  cfg.validate();
  std::vector<double> values = cfg.a_values;
  if (cfg.sweep_count > 0) {
    values.clear();
    const double lo = std::log(cfg.sweep_min), hi = std::log(cfg.sweep_max);
    for (int i = 0; i < cfg.sweep_count; ++i) {
      const double f = cfg.sweep_count == 1 ? 0.0 : static_cast<double>(i) / (cfg.sweep_count - 1);
      values.push_back(std::exp(lo + f * (hi - lo)));
    }
  }
  std::vector<io::EigencycleRow> rows;
  for (const auto& r : sweep_a(values)) rows.push_back({r.a, r.set});
  std::vector<fs::path> written;
  write(cfg.out / "sweep" / "sweep.csv", io::eigencycle_csv(rows), written);
  return written;
}

}  // namespace cyclegame::cli

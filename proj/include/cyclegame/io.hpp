#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "cyclegame/abm.hpp"
#include "cyclegame/eigencycle.hpp"
#include "cyclegame/measurement.hpp"
#include "cyclegame/stats.hpp"

namespace cyclegame::io {

// Every file starts with "# schema=<tag>" ahead of its column header.
inline constexpr const char* kTrajectorySchema = "cyclegame.trajectory/1";
inline constexpr const char* kEigencycleSchema = "cyclegame.eigencycles/1";
inline constexpr const char* kReportSchema = "cyclegame.report/1";
inline constexpr const char* kSessionSchema = "cyclegame.sessions/1";
inline constexpr const char* kJsonSchemaKey = "schema";

std::string format_number(double v);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

// CSV `t,x1,x2,x3,x4` plus a JSON sidecar (same stem, .json) with metadata.
void write_trajectory(const std::filesystem::path& csv_path, const Trajectory& traj);
std::string trajectory_csv(const TimeSeries& series);
nlohmann::json trajectory_meta_json(const Trajectory& traj);
TimeSeries parse_trajectory_csv(const std::string& text);
TimeSeries read_trajectory(const std::filesystem::path& csv_path);

nlohmann::json spectrum_json(const Spectrum& s);

struct EigencycleRow {
  double a;
  EigencycleSet set;
};
// CSV `a,s12,s13,s14,s23,s24,s34`.
std::string eigencycle_csv(const std::vector<EigencycleRow>& rows);

nlohmann::json ellipses_json(const std::vector<Ellipse>& ellipses, double a);

// One measured or theoretical source at one treatment.
struct ReportRow {
  std::string source;
  double a = 0.0;
  Set6 values{};
  AxisVector axis;
  std::size_t n_samples = 0;
};
// CSV `source,a,L12,L13,L14,L23,L24,L34,axis1,axis3,axis2,n_samples`.
std::string report_csv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_report_csv(const std::string& text);

// CSV `session_id,period,n1,n2,n3,n4`; a treatment comment `# a=<value>`
// follows the schema line when all sessions share one a.
std::string session_csv(const std::vector<SessionRecord>& sessions);
// Sessions keep file order. `default_a` is used when the file carries no
// treatment comment; counts must sum to a constant within each session.
std::vector<SessionRecord> parse_session_csv(const std::string& text, double default_a);

// Flat `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);

}  // namespace cyclegame::io

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclegame/abm.hpp"
#include "cyclegame/dynamics.hpp"
#include "cyclegame/io.hpp"

namespace cyclegame::cli {

enum class Origin { FixedPoint, Mean };

struct RunConfig {
  std::vector<double> a_values{0.25, 4.0};
  std::vector<std::string> models{"T1", "T2", "T3", "T4", "T5"};
  std::vector<std::string> protocols{"S1", "S2", "S3", "S4", "S5"};
  std::optional<double> noise;  // for the generic "logit" model/protocol labels
  LogitConvention convention = LogitConvention::Temperature;
  Origin origin = Origin::FixedPoint;
  std::uint64_t seed = 20260101;

  long steps = 100000;  // ODE
  double dt = 0.01;
  long ticks = 10000;   // ABM
  int sessions = 8;
  int periods = 1000;
  int players = 6;
  int window = 50;
  double temperature = 0.005;

  double perturbation = 1e-5;  // linearized theory orbits
  double amplitude = 1e-2;     // ODE starting offset and manifold orbits
  double orbit_periods = 3.0;

  // sweep: log-spaced when sweep_count > 0, otherwise a_values
  double sweep_min = 0.05;
  double sweep_max = 20.0;
  int sweep_count = 0;

  double flag_threshold = 0.9;
  bool write_trajectories = true;
  std::filesystem::path out = "out";
  std::vector<std::filesystem::path> inputs;

  void validate() const;
};

// Keys are the long flag names; '_' and '-' are interchangeable. Unknown keys
// are rejected. List values are comma separated.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig load_config(const std::filesystem::path& path);

// "T1".."T5", "logit" (uses cfg.noise), "replicator", "ms-replicator".
DynamicsModel resolve_model(const std::string& label, const RunConfig& cfg);
// "S1".."S5" or "logit" (uses cfg.noise).
AbmConfig resolve_protocol(const std::string& label, const RunConfig& cfg);
// Mean-field model whose rest point is the natural origin for a protocol.
DynamicsModel protocol_model(const std::string& label, const RunConfig& cfg);

// Orbit of the replicator started at amplitude * Re(v) off the equilibrium,
// integrated over `periods` turns of the principal mode.
Trajectory superplane_orbit(const GameSpec& g, double amplitude, double periods = 1.0, int samples_per_period = 2000);

// Transition-weighted mean of per-session rows; equal to measuring the
// concatenated series without the seams between sessions.
io::ReportRow pool_rows(const std::vector<io::ReportRow>& rows, const std::string& source);

struct CompareResult {
  nlohmann::json json;
  std::string text;
};
CompareResult compare_rows(const std::vector<io::ReportRow>& rows, double flag_threshold = 0.9);

// Each writes its files under cfg.out/<command>/ and returns the written paths.
std::vector<std::filesystem::path> cmd_theory(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_ingest(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_measure(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_compare(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_manifold(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_sweep(const RunConfig& cfg);

}  // namespace cyclegame::cli

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyclegame/game.hpp"

namespace cyclegame {

// How the logit noise parameter enters the softmax.
//   temperature: p_i ~ exp(U_i / eta)   (large eta washes out payoffs)
//   gain:        p_i ~ exp(lambda U_i)  (large lambda approaches best reply)
enum class LogitConvention { Temperature, Gain };

struct DynamicsModel {
  enum class Kind { Replicator, MSReplicator, Logit };

  Kind kind = Kind::Replicator;
  double noise = 0.0;  // logit only
  LogitConvention convention = LogitConvention::Temperature;

  static DynamicsModel replicator() { return {Kind::Replicator, 0.0, LogitConvention::Temperature}; }
  static DynamicsModel ms_replicator() { return {Kind::MSReplicator, 0.0, LogitConvention::Temperature}; }
  static DynamicsModel logit(double noise, LogitConvention conv = LogitConvention::Temperature);

  // Multiplier applied to payoffs inside the softmax (1/eta or lambda).
  double logit_sharpness() const;
  std::string name() const;
};

// Mean-field presets T1..T5. T3..T5 are logit (noise 0.001 / 0.05 / 300).
DynamicsModel theory_model(int index, LogitConvention conv = LogitConvention::Temperature);
DynamicsModel theory_model(const std::string& label, LogitConvention conv = LogitConvention::Temperature);

// Plain sampled series; the input type of every measurement. Samples need
// not lie on the simplex (linearized offsets, synthetic loops).
struct TimeSeries {
  std::vector<Vec4> samples;
  double dt = 1.0;
  double t0 = 0.0;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
};

struct TrajectoryMeta {
  std::string source;  // "ode", "abm", "session", ...
  std::optional<double> a;
  std::string model;
  std::optional<double> noise;
  std::optional<std::uint64_t> seed;
  long drift_corrections = 0;
};

// Time series of simplex states. Construction validates every sample.
class Trajectory {
 public:
  Trajectory(TimeSeries series, TrajectoryMeta meta);

  const TimeSeries& series() const { return series_; }
  const std::vector<Vec4>& samples() const { return series_.samples; }
  double dt() const { return series_.dt; }
  double t0() const { return series_.t0; }
  std::size_t size() const { return series_.size(); }
  const TrajectoryMeta& meta() const { return meta_; }
  TrajectoryMeta& meta() { return meta_; }

 private:
  TimeSeries series_;
  TrajectoryMeta meta_;
};

Vec4 vector_field(const DynamicsModel& model, const GameSpec& g, const Vec4& x);
Vec4 vector_field(const DynamicsModel& model, const GameSpec& g, const SimplexState& s);

// Closed-form derivative of vector_field with respect to x (unconstrained R^4).
Mat4 field_jacobian(const DynamicsModel& model, const GameSpec& g, const Vec4& x);

// Classical RK4 with fixed step. Samples drifting off the simplex by more
// than 1e-10 are renormalized and counted in meta().drift_corrections.
Trajectory integrate(const DynamicsModel& model, const GameSpec& g, const SimplexState& s0, double dt,
                     long steps);

struct FixedPointOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

// Rest point of the model near `guess`: damped Newton with backtracking,
// falling back to a sharpness continuation for logit models.
SimplexState fixed_point(const DynamicsModel& model, const GameSpec& g, const SimplexState& guess,
                         const FixedPointOptions& opts = {});

}  // namespace cyclegame

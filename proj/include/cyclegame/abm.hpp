#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cyclegame/dynamics.hpp"
#include "cyclegame/game.hpp"

namespace cyclegame {

enum class DecisionMethod { PairwiseDifference, PositiveProportional, Logit };

struct AbmConfig {
  int n_agents = 1000;
  std::array<int, 4> initial_counts{250, 250, 250, 250};
  int n_candidates = 2;  // including the revising agent
  DecisionMethod decision = DecisionMethod::PairwiseDifference;
  double noise = 0.0;  // logit only
  LogitConvention convention = LogitConvention::Temperature;
  double prob_revision = 0.2;
  int revisions_per_tick = 500;  // hard cap on revisions within one tick
  double prob_mutation = 0.002;
  bool complete_matching = true;
  std::uint64_t seed = 0;

  void validate() const;
};

// Presets S1..S5. S3..S5 use logit decisions (noise 0.001 / 0.05 / 300);
// unlisted fields keep their defaults.
AbmConfig abm_protocol(int index, LogitConvention conv = LogitConvention::Temperature);
AbmConfig abm_protocol(const std::string& label, LogitConvention conv = LogitConvention::Temperature);

// Imitative revision in a finite population. Revising agents are visited in
// index order within a tick and see the counts left by earlier revisions.
// Emits ticks + 1 frequency samples (the initial state first), dt = 1.
Trajectory simulate_abm(const GameSpec& g, const AbmConfig& cfg, long ticks);

struct SessionRecord {
  std::string session_id;
  double a = 1.0;
  int population_size = 0;
  std::vector<std::array<int, 4>> periods;  // strategy counts per period

  void validate() const;
};

// Surrogate for small-group random-matching sessions: each player remembers
// its last `window` opponents' strategies and plays a logit response with
// temperature `temperature` to that empirical mixture.
struct SessionConfig {
  int n_players = 6;
  int periods = 1000;
  int window = 50;
  double temperature = 0.005;
  std::uint64_t seed = 0;
};

SessionRecord simulate_session(const GameSpec& g, const SessionConfig& cfg, const std::string& session_id);

// Frequencies per period, dt = 1.
Trajectory session_trajectory(const SessionRecord& record);

}  // namespace cyclegame

#include "cyclegame/abm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "cyclegame/errors.hpp"
#include "cyclegame/rng.hpp"

namespace cyclegame {

namespace {

struct Population {
  const GameSpec& game;
  const AbmConfig& cfg;
  std::vector<int> strategy;
  std::array<int, 4> counts;
  Rng rng;

  // Expected payoff of an agent playing s against everyone else.
  double complete_payoff(int s) const {
    double u = 0.0;
    for (int j = 0; j < 4; ++j) u += game.matrix()(s, j) * (counts[j] - (j == s ? 1 : 0));
    return u / (cfg.n_agents - 1);
  }

  // One sampled opponent other than `self`.
  double sampled_payoff(int self) {
    auto other = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.n_agents - 1)));
    if (other >= self) ++other;
    return game.matrix()(strategy[self], strategy[other]);
  }

  double payoff(int agent) { return cfg.complete_matching ? complete_payoff(strategy[agent]) : sampled_payoff(agent); }

  // Distinct agents other than `self`, uniformly without replacement.
  std::vector<int> draw_others(int self, int k) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    while (static_cast<int>(out.size()) < k) {
      auto c = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.n_agents - 1)));
      if (c >= self) ++c;
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
  }

  int pick_weighted(const std::vector<double>& w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) return static_cast<int>(rng.below(w.size()));
    double r = rng.uniform() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (r < w[i]) return static_cast<int>(i);
      r -= w[i];
    }
    return static_cast<int>(w.size()) - 1;
  }

  int decide(int agent) {
    const int own = strategy[agent];
    const std::vector<int> others = draw_others(agent, cfg.n_candidates - 1);
    switch (cfg.decision) {
      case DecisionMethod::PairwiseDifference: {
        const int cand = others.front();
        const double range = game.payoff_range();
        if (!(range > 0.0)) return own;
        const double gain = payoff(cand) - payoff(agent);
        return rng.bernoulli(std::max(0.0, gain) / range) ? strategy[cand] : own;
      }
      case DecisionMethod::PositiveProportional: {
        std::vector<double> w{std::max(0.0, payoff(agent))};
        for (int c : others) w.push_back(std::max(0.0, payoff(c)));
        const int k = pick_weighted(w);
        return k == 0 ? own : strategy[others[k - 1]];
      }
      case DecisionMethod::Logit: {
        const double sharp = cfg.convention == LogitConvention::Temperature ? 1.0 / cfg.noise : cfg.noise;
        std::vector<double> u{payoff(agent)};
        for (int c : others) u.push_back(payoff(c));
        const double peak = *std::max_element(u.begin(), u.end());
        for (double& v : u) v = std::exp(sharp * (v - peak));
        const int k = pick_weighted(u);
        return k == 0 ? own : strategy[others[k - 1]];
      }
    }
    return own;
  }

  void revise(int agent) {
    int next = decide(agent);
    if (rng.bernoulli(cfg.prob_mutation)) next = static_cast<int>(rng.below(4));
    if (next != strategy[agent]) {
      --counts[strategy[agent]];
      ++counts[next];
      strategy[agent] = next;
    }
  }

  Vec4 frequencies() const {
    return Vec4(counts[0], counts[1], counts[2], counts[3]) / static_cast<double>(cfg.n_agents);
  }
};

}  // namespace

void AbmConfig::validate() const {
  if (n_agents < 2) throw ValidationError("abm needs at least 2 agents");
  int total = 0;
  for (int c : initial_counts) {
    if (c < 0) throw ValidationError("initial counts must be nonnegative");
    total += c;
  }
  if (total != n_agents) throw ValidationError("initial counts must sum to n_agents");
  if (n_candidates < 2 || n_candidates > n_agents) {
    throw ValidationError("n_candidates must be between 2 and n_agents");
  }
  if (!(prob_revision > 0.0 && prob_revision <= 1.0)) throw ValidationError("prob_revision must lie in (0, 1]");
  if (!(prob_mutation >= 0.0 && prob_mutation < 1.0)) throw ValidationError("prob_mutation must lie in [0, 1)");
  if (revisions_per_tick < 1) throw ValidationError("revisions_per_tick must be positive");
  if (decision == DecisionMethod::Logit && !(noise > 0.0 && std::isfinite(noise))) {
    throw ValidationError("logit decision needs a positive noise level");
  }
}

AbmConfig abm_protocol(int index, LogitConvention conv) {
  AbmConfig cfg;
  cfg.convention = conv;
  switch (index) {
    case 1:
      cfg.decision = DecisionMethod::PairwiseDifference;
      break;
    case 2:
      cfg.decision = DecisionMethod::PositiveProportional;
      break;
    case 3:
    case 4:
    case 5:
      cfg.decision = DecisionMethod::Logit;
      cfg.noise = index == 3 ? 0.001 : (index == 4 ? 0.05 : 300.0);
      break;
    default:
      throw ValidationError("abm protocol index must be 1..5, got " + std::to_string(index));
  }
  return cfg;
}

AbmConfig abm_protocol(const std::string& label, LogitConvention conv) {
  if (label.size() == 2 && (label[0] == 'S' || label[0] == 's') && label[1] >= '1' && label[1] <= '5') {
    return abm_protocol(label[1] - '0', conv);
  }
  throw ValidationError("unknown protocol label '" + label + "' (expected S1..S5)");
}

Trajectory simulate_abm(const GameSpec& g, const AbmConfig& cfg, long ticks) {
  cfg.validate();
  if (ticks < 1) throw ValidationError("abm needs at least one tick");

  Population pop{g, cfg, {}, cfg.initial_counts, Rng(cfg.seed)};
  pop.strategy.reserve(static_cast<std::size_t>(cfg.n_agents));
  for (int s = 0; s < 4; ++s) pop.strategy.insert(pop.strategy.end(), static_cast<std::size_t>(cfg.initial_counts[s]), s);

  TimeSeries series;
  series.dt = 1.0;
  series.samples.reserve(static_cast<std::size_t>(ticks) + 1);
  series.samples.push_back(pop.frequencies());
  for (long t = 0; t < ticks; ++t) {
    int revisions = 0;
    for (int agent = 0; agent < cfg.n_agents && revisions < cfg.revisions_per_tick; ++agent) {
      if (!pop.rng.bernoulli(cfg.prob_revision)) continue;
      pop.revise(agent);
      ++revisions;
    }
    series.samples.push_back(pop.frequencies());
  }

  TrajectoryMeta meta;
  meta.source = "abm";
  meta.a = g.parameter();
  switch (cfg.decision) {
    case DecisionMethod::PairwiseDifference:
      meta.model = "pairwise-difference";
      break;
    case DecisionMethod::PositiveProportional:
      meta.model = "positive-proportional";
      break;
    case DecisionMethod::Logit:
      meta.model = "logit";
      meta.noise = cfg.noise;
      break;
  }
  meta.seed = cfg.seed;
  return Trajectory(std::move(series), std::move(meta));
}

void SessionRecord::validate() const {
  if (population_size < 1) throw ValidationError("session " + session_id + ": population size must be positive");
  if (periods.empty()) throw ValidationError("session " + session_id + ": no periods");
  for (std::size_t p = 0; p < periods.size(); ++p) {
    int total = 0;
    for (int c : periods[p]) {
      if (c < 0) throw ValidationError("session " + session_id + ": negative count in period " + std::to_string(p + 1));
      total += c;
    }
    if (total != population_size) {
      throw ValidationError("session " + session_id + ": period " + std::to_string(p + 1) + " counts sum to " +
                            std::to_string(total) + ", expected " + std::to_string(population_size));
    }
  }
}

SessionRecord simulate_session(const GameSpec& g, const SessionConfig& cfg, const std::string& session_id) {
  if (cfg.n_players < 2 || cfg.n_players % 2 != 0) throw ValidationError("session needs an even number of players");
  if (cfg.periods < 1) throw ValidationError("session needs at least one period");
  if (cfg.window < 1) throw ValidationError("session window must be positive");
  if (!(cfg.temperature > 0.0)) throw ValidationError("session temperature must be positive");

  Rng rng(cfg.seed);
  const auto n = static_cast<std::size_t>(cfg.n_players);
  std::vector<std::deque<int>> memory(n);
  std::vector<int> choice(n);
  std::vector<int> order(n);

  SessionRecord rec;
  rec.session_id = session_id;
  rec.a = g.a();
  rec.population_size = cfg.n_players;
  rec.periods.reserve(static_cast<std::size_t>(cfg.periods));

  for (int period = 0; period < cfg.periods; ++period) {
    std::array<int, 4> counts{};
    for (std::size_t i = 0; i < n; ++i) {
      Vec4 belief = Vec4::Constant(0.25);
      if (!memory[i].empty()) {
        belief.setZero();
        for (int s : memory[i]) belief[s] += 1.0;
        belief /= static_cast<double>(memory[i].size());
      }
      const Vec4 u = g.matrix() * belief / cfg.temperature;
      const Vec4 w = (u.array() - u.maxCoeff()).exp();
      double r = rng.uniform() * w.sum();
      int pick = 3;
      for (int s = 0; s < 4; ++s) {
        if (r < w[s]) {
          pick = s;
          break;
        }
        r -= w[s];
      }
      choice[i] = pick;
      ++counts[pick];
    }
    rec.periods.push_back(counts);

    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    for (std::size_t k = 0; k < n; k += 2) {
      const int p = order[k], q = order[k + 1];
      memory[p].push_back(choice[q]);
      memory[q].push_back(choice[p]);
      if (static_cast<int>(memory[p].size()) > cfg.window) memory[p].pop_front();
      if (static_cast<int>(memory[q].size()) > cfg.window) memory[q].pop_front();
    }
  }
  return rec;
}

Trajectory session_trajectory(const SessionRecord& record) {
  record.validate();
  TimeSeries series;
  series.dt = 1.0;
  series.samples.reserve(record.periods.size());
  for (const auto& c : record.periods) {
    series.samples.push_back(Vec4(c[0], c[1], c[2], c[3]) / static_cast<double>(record.population_size));
  }
  TrajectoryMeta meta;
  meta.source = "session:" + record.session_id;
  meta.a = record.a;
  return Trajectory(std::move(series), std::move(meta));
}

}  // namespace cyclegame

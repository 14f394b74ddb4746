#include "cyclegame/game.hpp"

#include <cmath>
#include <string>

#include "cyclegame/errors.hpp"

namespace cyclegame {

namespace {

Mat4 cyclic_matrix(double a) {
  Mat4 m = Mat4::Zero();
  m(0, 3) = a;
  m(1, 0) = 1.0;
  m(2, 1) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

}  // namespace

GameSpec GameSpec::cyclic(double a) {
  if (!std::isfinite(a) || a <= 0.0) {
    throw ValidationError("payoff parameter a must be positive and finite, got " + std::to_string(a));
  }
  return GameSpec(cyclic_matrix(a), a);
}

GameSpec GameSpec::from_matrix(const Mat4& payoff) {
  if (!payoff.allFinite()) throw ValidationError("payoff matrix has non-finite entries");
  const double a = payoff(0, 3);
  if (a > 0.0 && payoff == cyclic_matrix(a)) return GameSpec(payoff, a);
  return GameSpec(payoff, std::nullopt);
}

double GameSpec::a() const {
  if (!a_) throw UnsupportedError("payoff matrix is not a member of the cyclic family");
  return *a_;
}

double GameSpec::payoff_range() const { return payoff_.maxCoeff() - payoff_.minCoeff(); }

SimplexState::SimplexState(const Vec4& x) : x_(x) {
  if (!x.allFinite()) throw ValidationError("simplex state has non-finite components");
  for (int i = 0; i < kStrategies; ++i) {
    if (x_[i] < -kSimplexNegTol) {
      throw ValidationError("simplex state component x" + std::to_string(i + 1) + " is negative");
    }
    if (x_[i] < 0.0) x_[i] = 0.0;
  }
  if (std::abs(x_.sum() - 1.0) > kSimplexSumTol) {
    throw ValidationError("simplex state does not sum to 1 (sum = " + std::to_string(x.sum()) + ")");
  }
}

SimplexState SimplexState::project(const Vec4& x) {
  if (!x.allFinite()) throw ValidationError("cannot project non-finite vector onto the simplex");
  Vec4 c = x.cwiseMax(0.0);
  const double total = c.sum();
  if (total <= 0.0) throw ValidationError("cannot project vector with no positive mass onto the simplex");
  return SimplexState(c / total);
}

SimplexState SimplexState::uniform() { return SimplexState(Vec4::Constant(0.25)); }

SimplexState SimplexState::vertex(int i) {
  if (i < 0 || i >= kStrategies) throw ValidationError("vertex index out of range");
  return SimplexState(Vec4::Unit(i));
}

GameSpec make_game(double a) { return GameSpec::cyclic(a); }

SimplexState nash_equilibrium(const GameSpec& g) {
  const double a = g.a();
  return SimplexState(Vec4(a, a, a, 1.0) / (3.0 * a + 1.0));
}

Vec4 payoffs(const GameSpec& g, const Vec4& x) { return g.matrix() * x; }
Vec4 payoffs(const GameSpec& g, const SimplexState& s) { return payoffs(g, s.vec()); }

double mean_payoff(const GameSpec& g, const Vec4& x) { return x.dot(g.matrix() * x); }
double mean_payoff(const GameSpec& g, const SimplexState& s) { return mean_payoff(g, s.vec()); }

}  // namespace cyclegame

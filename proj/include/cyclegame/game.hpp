#pragma once

#include <optional>

#include <Eigen/Dense>

namespace cyclegame {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

inline constexpr int kStrategies = 4;
inline constexpr double kSimplexSumTol = 1e-10;
inline constexpr double kSimplexNegTol = 1e-12;

// One-population symmetric 4-strategy game. Built either from the cyclic
// family parameter a (row 1 pays a against strategy 4, each other strategy
// pays 1 against its predecessor) or from an arbitrary payoff matrix.
class GameSpec {
 public:
  static GameSpec cyclic(double a);
  // Arbitrary matrix. If it matches the cyclic family exactly the family
  // parameter is recovered, so the closed forms stay available.
  static GameSpec from_matrix(const Mat4& payoff);

  const Mat4& matrix() const { return payoff_; }
  // Family parameter, empty for matrices outside the cyclic family.
  std::optional<double> parameter() const { return a_; }
  // Family parameter or UnsupportedError.
  double a() const;

  // max - min payoff entry; the normalizer of pairwise-difference switching.
  double payoff_range() const;

 private:
  GameSpec(const Mat4& payoff, std::optional<double> a) : payoff_(payoff), a_(a) {}
  Mat4 payoff_;
  std::optional<double> a_;
};

// Point of the probability simplex over the four strategies.
class SimplexState {
 public:
  // Validates: components >= -1e-12, sum within 1e-10 of 1. Tiny negative
  // components are clamped to zero.
  explicit SimplexState(const Vec4& x);
  SimplexState(double x1, double x2, double x3, double x4) : SimplexState(Vec4(x1, x2, x3, x4)) {}

  // Clamps negatives and divides by the sum; rejects non-finite input or a
  // vector with no positive mass.
  static SimplexState project(const Vec4& x);
  static SimplexState uniform();
  static SimplexState vertex(int i);

  const Vec4& vec() const { return x_; }
  double operator[](int i) const { return x_[i]; }

 private:
  Vec4 x_;
};

GameSpec make_game(double a);

// Unique interior equilibrium (a, a, a, 1) / (3a + 1) of the cyclic family.
SimplexState nash_equilibrium(const GameSpec& g);

// U_i = sum_j A_ij x_j
Vec4 payoffs(const GameSpec& g, const SimplexState& s);
Vec4 payoffs(const GameSpec& g, const Vec4& x);

double mean_payoff(const GameSpec& g, const SimplexState& s);
double mean_payoff(const GameSpec& g, const Vec4& x);

}  // namespace cyclegame

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "cyclegame/errors.hpp"
#include "cyclegame/measurement.hpp"
#include "cyclegame/stats.hpp"

using namespace cyclegame;

namespace {

// Series in the (x_m, x_n) plane, other coordinates zero.
TimeSeries planar(const std::vector<std::array<double, 2>>& pts, int m = 0, int n = 1) {
  TimeSeries ts;
  for (const auto& p : pts) {
    Vec4 x = Vec4::Zero();
    x[m] = p[0];
    x[n] = p[1];
    ts.samples.push_back(x);
  }
  return ts;
}

TimeSeries random_closed_loop(std::mt19937_64& gen, int n) {
  std::normal_distribution<double> d(0.0, 1.0);
  TimeSeries ts;
  for (int i = 0; i < n; ++i) ts.samples.push_back(Vec4(d(gen), d(gen), d(gen), d(gen)));
  ts.samples.push_back(ts.samples.front());
  return ts;
}

}  // namespace

TEST_CASE("unit diamond loop") {
  const auto ccw = planar({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 0}});
  CHECK(angular_momentum(ccw, Vec4::Zero(), 0, 1) == 1.0);
  const auto cw = planar({{1, 0}, {0, -1}, {-1, 0}, {0, 1}, {1, 0}});
  CHECK(angular_momentum(cw, Vec4::Zero(), 0, 1) == -1.0);
  CHECK(angular_momentum(ccw, Vec4::Zero(), 2, 3) == 0.0);
}

TEST_CASE("degenerate input") {
  TimeSeries still;
  still.samples.assign(10, Vec4(0.1, 0.2, 0.3, 0.4));
  for (double v : angular_momentum_set(still, Vec4::Constant(0.25)).values) CHECK(v == 0.0);
  TimeSeries one;
  one.samples.push_back(Vec4::Zero());
  CHECK_THROWS_AS(angular_momentum(one, Vec4::Zero(), 0, 1), ValidationError);
  CHECK_THROWS_AS(angular_momentum(still, Vec4::Zero(), 1, 1), ValidationError);
  CHECK_THROWS_AS(angular_momentum(still, Vec4::Zero(), 2, 4), ValidationError);
}

TEST_CASE("closed loops are origin independent") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 50; ++trial) {
    const TimeSeries ts = random_closed_loop(gen, 30);
    const auto a = angular_momentum_set(ts, Vec4::Zero());
    const auto b = angular_momentum_set(ts, Vec4(3.0, -2.0, 0.5, 7.0));
    for (int i = 0; i < 6; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
  }
}

TEST_CASE("scaling and time reversal") {
  std::mt19937_64 gen(23);
  const TimeSeries ts = random_closed_loop(gen, 40);
  TimeSeries scaled = ts, reversed = ts;
  for (auto& x : scaled.samples) x *= 3.0;
  std::reverse(reversed.samples.begin(), reversed.samples.end());
  const auto base = angular_momentum_set(ts, Vec4::Zero());
  const auto s = angular_momentum_set(scaled, Vec4::Zero());
  const auto r = angular_momentum_set(reversed, Vec4::Zero());
  const AxisVector ax = rotation_axis(ts, Vec4::Zero()), rax = rotation_axis(reversed, Vec4::Zero());
  for (int i = 0; i < 6; ++i) {
    CHECK(s[i] == doctest::Approx(9 * base[i]));
    CHECK(r[i] == doctest::Approx(-base[i]));
  }
  for (int i = 0; i < 3; ++i) CHECK(rax[i] == doctest::Approx(-ax[i]));
}

TEST_CASE("axis components are pairwise angular momenta") {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 20; ++trial) {
    const TimeSeries ts = random_closed_loop(gen, 25);
    const Vec4 o(0.1, 0.2, 0.3, 0.4);
    const auto set = angular_momentum_set(ts, o);
    const AxisVector direct = rotation_axis(ts, o);
    const AxisVector assembled = axis_from_set(set.values);
    for (int i = 0; i < 3; ++i) CHECK(direct[i] == doctest::Approx(assembled[i]).epsilon(1e-12));
    // z component: rotation in the (x1, x3) plane.
    CHECK(direct[2] == doctest::Approx(set[1]).epsilon(1e-12));
  }
}

TEST_CASE("planar circle in (x1, x3)") {
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i <= 100; ++i) {
    const double t = 2 * std::numbers::pi * i / 100;
    pts.push_back({std::cos(t), std::sin(t)});
  }
  const AxisVector ax = rotation_axis(planar(pts, 0, 2), Vec4::Zero());
  CHECK(ax[0] == 0.0);
  CHECK(ax[1] == 0.0);
  CHECK(ax[2] > 0.0);
}

TEST_CASE("white noise has no rotation") {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> d(0.0, 1.0);
  TimeSeries ts;
  for (int i = 0; i < 10000; ++i) ts.samples.push_back(Vec4(d(gen), d(gen), d(gen), d(gen)));
  const auto set = angular_momentum_set(ts, Vec4::Zero());
  // Per-transition cross products of iid unit normals have variance 2.
  const double bound = 3.0 * std::sqrt(2.0 / 9999.0);
  for (double v : set.values) CHECK(std::abs(v) < bound);
}

TEST_CASE("empirical mean and line residual") {
  const auto ts = planar({{0, 0}, {1, 2}, {2, 4}, {3, 6}});
  CHECK(empirical_mean(ts)[1] == doctest::Approx(3.0));
  CHECK(line_fit_residual(ts, 0, 1) < 1e-12);
  const auto square = planar({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(line_fit_residual(square, 0, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(empirical_mean(TimeSeries{}), ValidationError);
}

TEST_CASE("linearized measurement is proportional to theory") {
  for (double a : {0.25, 4.0}) {
    const GameSpec g = make_game(a);
    for (int k = 1; k <= 5; ++k) {
      const auto th = theory_eigencycles(theory_model(k), g);
      const auto lm = measure_linearized(th.spectrum);
      CHECK(pearson(lm.set.values, th.raw.values) > 0.999);
      CHECK(lm.axis.norm() > 0.0);
    }
  }
}

TEST_CASE("linearized axes follow the tabulated directions") {
  const std::array<double, 3> quarter{-0.0212, -0.0212, 0.0127}, four{-0.0847, -0.0847, -0.0508};
  auto cosine = [](const AxisVector& v, const std::array<double, 3>& w) {
    const double dot = v[0] * w[0] + v[1] * w[1] + v[2] * w[2];
    return dot / (v.norm() * std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]));
  };
  const auto tq = theory_eigencycles(DynamicsModel::replicator(), make_game(0.25));
  const auto tf = theory_eigencycles(DynamicsModel::replicator(), make_game(4));
  CHECK(cosine(measure_linearized(tq.spectrum).axis, quarter) > 0.999);
  CHECK(cosine(measure_linearized(tf.spectrum).axis, four) > 0.999);
}

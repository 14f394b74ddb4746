#include "doctest.h"

#include <cmath>
#include <limits>

#include "cyclegame/errors.hpp"
#include "cyclegame/game.hpp"

using namespace cyclegame;

TEST_CASE("cyclic payoff matrix layout") {
  const GameSpec g = make_game(0.25);
  Mat4 expected;
  expected << 0, 0, 0, 0.25, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0;
  CHECK(g.matrix() == expected);
  CHECK(g.a() == 0.25);
  CHECK(g.payoff_range() == 1.0);
  CHECK(make_game(4).payoff_range() == 4.0);
}

TEST_CASE("a = 1 gives a permutation matrix") {
  const Mat4 m = make_game(1).matrix();
  CHECK(m.sum() == 4.0);
  for (int i = 0; i < 4; ++i) CHECK(m.row(i).sum() == 1.0);
}

TEST_CASE("invalid family parameter") {
  CHECK_THROWS_AS(make_game(0), ValidationError);
  CHECK_THROWS_AS(make_game(-1), ValidationError);
  CHECK_THROWS_AS(make_game(std::numeric_limits<double>::infinity()), ValidationError);
  CHECK_THROWS_AS(make_game(std::nan("")), ValidationError);
}

TEST_CASE("from_matrix recovers the family parameter") {
  CHECK(GameSpec::from_matrix(make_game(3).matrix()).parameter() == 3.0);
  Mat4 m = Mat4::Identity();
  const GameSpec other = GameSpec::from_matrix(m);
  CHECK_FALSE(other.parameter().has_value());
  CHECK_THROWS_AS(other.a(), UnsupportedError);
  CHECK_THROWS_AS(nash_equilibrium(other), UnsupportedError);
}

TEST_CASE("equilibrium oracle values") {
  const Vec4 q = nash_equilibrium(make_game(0.25)).vec();
  CHECK(q[0] == doctest::Approx(1.0 / 7).epsilon(1e-14));
  CHECK(q[3] == doctest::Approx(4.0 / 7).epsilon(1e-14));
  const Vec4 f = nash_equilibrium(make_game(4)).vec();
  CHECK(f[0] == doctest::Approx(4.0 / 13).epsilon(1e-14));
  CHECK(f[3] == doctest::Approx(1.0 / 13).epsilon(1e-14));
  const Vec4 one = nash_equilibrium(make_game(1)).vec();
  for (int i = 0; i < 4; ++i) CHECK(one[i] == doctest::Approx(0.25));
}

TEST_CASE("equilibrium equalizes payoffs for many a") {
  for (double a = 0.01; a < 100; a *= 1.37) {
    const GameSpec g = make_game(a);
    const SimplexState x = nash_equilibrium(g);
    const Vec4 u = payoffs(g, x);
    for (int i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(a / (3 * a + 1)).epsilon(1e-12));
    CHECK(mean_payoff(g, x) == doctest::Approx(a / (3 * a + 1)).epsilon(1e-12));
    CHECK(x.vec().sum() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("simplex validation") {
  CHECK_NOTHROW(SimplexState(0.25, 0.25, 0.25, 0.25));
  CHECK_THROWS_AS(SimplexState(0.5, 0.5, 0.5, 0.0), ValidationError);
  CHECK_THROWS_AS(SimplexState(1.1, -0.1, 0.0, 0.0), ValidationError);
  const SimplexState clamped(Vec4(1.0 + 5e-13, -5e-13, 0, 0));
  CHECK(clamped[1] == 0.0);
  CHECK(SimplexState::vertex(2)[2] == 1.0);
  CHECK_THROWS_AS(SimplexState::vertex(4), ValidationError);
  const SimplexState p = SimplexState::project(Vec4(2, -1, 1, 1));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == 0.0);
  CHECK_THROWS_AS(SimplexState::project(Vec4(-1, -1, 0, 0)), ValidationError);
}

TEST_CASE("payoffs are linear in the state") {
  const GameSpec g = make_game(2.5);
  const Vec4 x(0.1, 0.2, 0.3, 0.4), y(0.4, 0.3, 0.2, 0.1);
  const Vec4 mix = 0.3 * x + 0.7 * y;
  CHECK((payoffs(g, mix) - (0.3 * payoffs(g, x) + 0.7 * payoffs(g, y))).norm() < 1e-15);
  CHECK(mean_payoff(g, x) == doctest::Approx(x.dot(g.matrix() * x)));
}

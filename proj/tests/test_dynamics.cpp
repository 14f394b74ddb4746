#include "doctest.h"

#include <cmath>
#include <random>

#include "cyclegame/dynamics.hpp"
#include "cyclegame/errors.hpp"

using namespace cyclegame;

namespace {

Vec4 random_interior(std::mt19937_64& gen) {
  std::exponential_distribution<double> e(1.0);
  Vec4 x(e(gen), e(gen), e(gen), e(gen));
  return x / x.sum();
}

Vec4 softmax(const Vec4& u, double k) {
  const Vec4 w = (k * (u.array() - u.maxCoeff())).exp().matrix();
  return w / w.sum();
}

}  // namespace

TEST_CASE("rest points of the replicator") {
  for (double a : {0.25, 1.0, 4.0}) {
    const GameSpec g = make_game(a);
    CHECK(vector_field(DynamicsModel::replicator(), g, nash_equilibrium(g)).norm() < 1e-15);
    for (int i = 0; i < 4; ++i) CHECK(vector_field(DynamicsModel::replicator(), g, SimplexState::vertex(i)).norm() == 0.0);
  }
}

TEST_CASE("fields are tangent to the simplex") {
  std::mt19937_64 gen(7);
  const GameSpec g = make_game(4);
  const DynamicsModel models[] = {DynamicsModel::replicator(), DynamicsModel::ms_replicator(),
                                  DynamicsModel::logit(0.05), DynamicsModel::logit(3.0, LogitConvention::Gain)};
  for (int trial = 0; trial < 200; ++trial) {
    const Vec4 x = random_interior(gen);
    for (const auto& m : models) CHECK(std::abs(vector_field(m, g, x).sum()) < 1e-14);
  }
}

TEST_CASE("MS-replicator is the replicator divided by mean payoff") {
  std::mt19937_64 gen(11);
  const GameSpec g = make_game(0.25);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec4 x = random_interior(gen);
    const Vec4 rep = vector_field(DynamicsModel::replicator(), g, x);
    const Vec4 ms = vector_field(DynamicsModel::ms_replicator(), g, x);
    CHECK((ms * mean_payoff(g, x) - rep).norm() < 1e-14);
  }
  CHECK_THROWS_AS(vector_field(DynamicsModel::ms_replicator(), g, SimplexState::vertex(0)), SingularStateError);
}

TEST_CASE("logit conventions are reciprocal") {
  const GameSpec g = make_game(4);
  const Vec4 x(0.1, 0.2, 0.3, 0.4);
  const Vec4 t = vector_field(DynamicsModel::logit(0.05), g, x);
  const Vec4 k = vector_field(DynamicsModel::logit(20.0, LogitConvention::Gain), g, x);
  CHECK((t - k).norm() < 1e-14);
  CHECK(DynamicsModel::logit(0.05).logit_sharpness() == doctest::Approx(20.0));
  CHECK_THROWS_AS(DynamicsModel::logit(0.0), ValidationError);
  CHECK_THROWS_AS(DynamicsModel::replicator().logit_sharpness(), ValidationError);
}

TEST_CASE("theory model presets") {
  CHECK(theory_model("T1").kind == DynamicsModel::Kind::Replicator);
  CHECK(theory_model("T2").kind == DynamicsModel::Kind::MSReplicator);
  CHECK(theory_model("T3").noise == 0.001);
  CHECK(theory_model("T4").noise == 0.05);
  CHECK(theory_model(5).noise == 300.0);
  CHECK(theory_model("T5", LogitConvention::Gain).convention == LogitConvention::Gain);
  CHECK_THROWS_AS(theory_model("T6"), ValidationError);
  CHECK_THROWS_AS(theory_model(0), ValidationError);
}

TEST_CASE("analytic jacobian matches central differences") {
  std::mt19937_64 gen(3);
  const GameSpec g = make_game(2.0);
  const DynamicsModel models[] = {DynamicsModel::replicator(), DynamicsModel::ms_replicator(),
                                  DynamicsModel::logit(0.3)};
  for (int trial = 0; trial < 20; ++trial) {
    const Vec4 x = random_interior(gen);
    for (const auto& m : models) {
      const Mat4 J = field_jacobian(m, g, x);
      Mat4 fd;
      const double h = 1e-6;
      for (int j = 0; j < 4; ++j) {
        Vec4 up = x, dn = x;
        up[j] += h;
        dn[j] -= h;
        fd.col(j) = (vector_field(m, g, up) - vector_field(m, g, dn)) / (2 * h);
      }
      CHECK((J - fd).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("RK4 converges at fourth order") {
  const GameSpec g = make_game(4);
  const SimplexState s0(0.4, 0.3, 0.2, 0.1);
  auto end_state = [&](double dt) {
    const auto steps = static_cast<long>(std::llround(2.0 / dt));
    return integrate(DynamicsModel::replicator(), g, s0, dt, steps).samples().back();
  };
  const Vec4 ref = end_state(1e-4);
  const double e1 = (end_state(0.1) - ref).norm();
  const double e2 = (end_state(0.05) - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("integrate bookkeeping") {
  const GameSpec g = make_game(0.25);
  const Trajectory t = integrate(DynamicsModel::replicator(), g, SimplexState(0.3, 0.3, 0.2, 0.2), 0.01, 500);
  CHECK(t.size() == 501);
  CHECK(t.meta().source == "ode");
  CHECK(t.meta().a == 0.25);
  for (const auto& x : t.samples()) CHECK(std::abs(x.sum() - 1.0) <= 1e-10);
  CHECK_THROWS_AS(integrate(DynamicsModel::replicator(), g, SimplexState::uniform(), 0.0, 5), ValidationError);
  CHECK_THROWS_AS(integrate(DynamicsModel::replicator(), g, SimplexState::uniform(), 0.1, 0), ValidationError);
}

TEST_CASE("vertices are absorbing and faces invariant") {
  const GameSpec g = make_game(4);
  const Trajectory v = integrate(DynamicsModel::replicator(), g, SimplexState::vertex(2), 0.1, 100);
  CHECK(v.samples().back() == SimplexState::vertex(2).vec());
  const Trajectory f = integrate(DynamicsModel::replicator(), g, SimplexState(0.5, 0.5, 0.0, 0.0), 0.1, 100);
  for (const auto& x : f.samples()) CHECK(x[2] + x[3] == 0.0);
}

TEST_CASE("trajectory validation") {
  TimeSeries one{{Vec4(0.25, 0.25, 0.25, 0.25)}, 1.0, 0.0};
  CHECK_THROWS_AS(Trajectory(one, {}), ValidationError);
  TimeSeries off{{Vec4(0.25, 0.25, 0.25, 0.25), Vec4(0.5, 0.5, 0.5, 0.0)}, 1.0, 0.0};
  CHECK_THROWS_AS(Trajectory(off, {}), ValidationError);
}

TEST_CASE("fixed points") {
  const GameSpec g = make_game(4);
  const Vec4 q = nash_equilibrium(g).vec();
  SUBCASE("replicator recovers the equilibrium from a nearby guess") {
    const SimplexState fp = fixed_point(DynamicsModel::replicator(), g, SimplexState(0.3, 0.3, 0.3, 0.1));
    CHECK((fp.vec() - q).norm() < 1e-9);
  }
  SUBCASE("logit rest point agrees with damped iteration of p = softmax(Ap)") {
    for (double eta : {0.05, 0.5, 300.0}) {
      const double k = 1.0 / eta;
      Vec4 p = Vec4::Constant(0.25);
      for (int it = 0; it < 200000; ++it) p = 0.99 * p + 0.01 * softmax(g.matrix() * p, k);
      const SimplexState fp = fixed_point(DynamicsModel::logit(eta), g, SimplexState::uniform());
      CHECK((fp.vec() - p).norm() < 1e-8);
      CHECK(vector_field(DynamicsModel::logit(eta), g, fp).norm() < 1e-10);
    }
  }
  SUBCASE("high noise logit sits near uniform") {
    const SimplexState fp = fixed_point(DynamicsModel::logit(300.0), g, SimplexState::uniform());
    CHECK((fp.vec() - Vec4::Constant(0.25)).norm() < 0.01);
  }
  SUBCASE("low noise logit approaches the equilibrium") {
    const SimplexState fp = fixed_point(DynamicsModel::logit(0.001), g, nash_equilibrium(g));
    CHECK((fp.vec() - q).norm() < 0.01);
  }
}

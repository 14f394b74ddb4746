#include "cyclegame/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "cyclegame/errors.hpp"

namespace cyclegame {

namespace {

// Mean payoffs at or below this are treated as the MS-replicator singularity.
constexpr double kSingularMeanPayoff = 1e-12;

Vec4 softmax(const Vec4& z) {
  const Vec4 e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

// Basis of the zero-sum tangent space of the simplex.
Eigen::Matrix<double, 4, 3> tangent_basis() {
  Eigen::Matrix<double, 4, 3> b = Eigen::Matrix<double, 4, 3>::Zero();
  for (int j = 0; j < 3; ++j) {
    b(j, j) = 1.0;
    b(3, j) = -1.0;
  }
  return b;
}

bool needs_renormalization(const Vec4& x) {
  return std::abs(x.sum() - 1.0) > kSimplexSumTol || x.minCoeff() < -kSimplexNegTol;
}

struct NewtonResult {
  Vec4 x;
  double residual;
  int iterations;
  bool converged;
};

NewtonResult newton(const DynamicsModel& model, const GameSpec& g, Vec4 x, double tol, int max_iter) {
  static const Eigen::Matrix<double, 4, 3> basis = tangent_basis();
  Vec4 f = vector_field(model, g, x);
  double res = f.lpNorm<Eigen::Infinity>();
  int it = 0;
  for (; it < max_iter && res >= tol; ++it) {
    const Eigen::Matrix<double, 4, 3> jt = field_jacobian(model, g, x) * basis;
    const Eigen::Vector3d c = jt.colPivHouseholderQr().solve(-f);
    const Vec4 step = basis * c;
    if (!step.allFinite()) break;

    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k < 50; ++k, alpha *= 0.5) {
      const Vec4 trial = x + alpha * step;
      if (trial.minCoeff() < 0.0) continue;
      const Vec4 ft = vector_field(model, g, trial);
      const double rt = ft.lpNorm<Eigen::Infinity>();
      if (rt < (1.0 - 1e-4 * alpha) * res || rt < tol) {
        x = trial;
        f = ft;
        res = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return {x, res, it, res < tol};
}

}  // namespace

DynamicsModel DynamicsModel::logit(double noise, LogitConvention conv) {
  if (!std::isfinite(noise) || noise <= 0.0) {
    throw ValidationError("logit noise must be positive and finite");
  }
  return {Kind::Logit, noise, conv};
}

double DynamicsModel::logit_sharpness() const {
  if (kind != Kind::Logit) throw ValidationError("sharpness is defined for logit models only");
  return convention == LogitConvention::Temperature ? 1.0 / noise : noise;
}

std::string DynamicsModel::name() const {
  switch (kind) {
    case Kind::Replicator:
      return "replicator";
    case Kind::MSReplicator:
      return "ms-replicator";
    case Kind::Logit: {
      std::ostringstream os;
      os << "logit[" << noise << (convention == LogitConvention::Gain ? ",gain" : "") << "]";
      return os.str();
    }
  }
  return "unknown";
}

DynamicsModel theory_model(int index, LogitConvention conv) {
  switch (index) {
    case 1:
      return DynamicsModel::replicator();
    case 2:
      return DynamicsModel::ms_replicator();
    case 3:
      return DynamicsModel::logit(0.001, conv);
    case 4:
      return DynamicsModel::logit(0.05, conv);
    case 5:
      return DynamicsModel::logit(300.0, conv);
    default:
      throw ValidationError("theory model index must be 1..5, got " + std::to_string(index));
  }
}

DynamicsModel theory_model(const std::string& label, LogitConvention conv) {
  if (label.size() == 2 && (label[0] == 'T' || label[0] == 't') && label[1] >= '1' && label[1] <= '5') {
    return theory_model(label[1] - '0', conv);
  }
  throw ValidationError("unknown model label '" + label + "' (expected T1..T5)");
}

Trajectory::Trajectory(TimeSeries series, TrajectoryMeta meta) : series_(std::move(series)), meta_(std::move(meta)) {
  if (series_.samples.size() < 2) throw ValidationError("trajectory needs at least 2 samples");
  if (!(series_.dt > 0.0) || !std::isfinite(series_.dt)) throw ValidationError("trajectory dt must be positive");
  for (auto& x : series_.samples) x = SimplexState(x).vec();
}

Vec4 vector_field(const DynamicsModel& model, const GameSpec& g, const Vec4& x) {
  const Vec4 u = g.matrix() * x;
  switch (model.kind) {
    case DynamicsModel::Kind::Replicator: {
      const double ubar = x.dot(u);
      return x.cwiseProduct(u - Vec4::Constant(ubar));
    }
    case DynamicsModel::Kind::MSReplicator: {
      const double ubar = x.dot(u);
      if (std::abs(ubar) <= kSingularMeanPayoff) {
        throw SingularStateError("MS-replicator is singular where the mean payoff vanishes");
      }
      return x.cwiseProduct(u - Vec4::Constant(ubar)) / ubar;
    }
    case DynamicsModel::Kind::Logit:
      return softmax(model.logit_sharpness() * u) - x;
  }
  return Vec4::Zero();
}

Vec4 vector_field(const DynamicsModel& model, const GameSpec& g, const SimplexState& s) {
  return vector_field(model, g, s.vec());
}

Mat4 field_jacobian(const DynamicsModel& model, const GameSpec& g, const Vec4& x) {
  const Mat4& a = g.matrix();
  const Vec4 u = a * x;
  const double ubar = x.dot(u);
  const Vec4 grad_ubar = (a + a.transpose()) * x;
  switch (model.kind) {
    case DynamicsModel::Kind::Replicator:
    case DynamicsModel::Kind::MSReplicator: {
      Mat4 j = x.asDiagonal() * (a - Vec4::Ones() * grad_ubar.transpose());
      j.diagonal() += u - Vec4::Constant(ubar);
      if (model.kind == DynamicsModel::Kind::Replicator) return j;
      if (std::abs(ubar) <= kSingularMeanPayoff) {
        throw SingularStateError("MS-replicator is singular where the mean payoff vanishes");
      }
      const Vec4 r = x.cwiseProduct(u - Vec4::Constant(ubar));
      return j / ubar - r * grad_ubar.transpose() / (ubar * ubar);
    }
    case DynamicsModel::Kind::Logit: {
      const double k = model.logit_sharpness();
      const Vec4 p = softmax(k * u);
      Mat4 dp = Mat4(p.asDiagonal()) - p * p.transpose();
      return k * dp * a - Mat4::Identity();
    }
  }
  return Mat4::Zero();
}

Trajectory integrate(const DynamicsModel& model, const GameSpec& g, const SimplexState& s0, double dt,
                     long steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("integration step dt must be positive");
  if (steps < 1) throw ValidationError("integration needs at least one step");
  if (!std::isfinite(dt * static_cast<double>(steps))) throw ValidationError("dt * steps is not finite");

  TimeSeries series;
  series.dt = dt;
  series.t0 = 0.0;
  series.samples.reserve(static_cast<std::size_t>(steps) + 1);
  series.samples.push_back(s0.vec());

  long corrections = 0;
  Vec4 x = s0.vec();
  for (long step = 1; step <= steps; ++step) {
    const Vec4 k1 = vector_field(model, g, x);
    const Vec4 k2 = vector_field(model, g, Vec4(x + 0.5 * dt * k1));
    const Vec4 k3 = vector_field(model, g, Vec4(x + 0.5 * dt * k2));
    const Vec4 k4 = vector_field(model, g, Vec4(x + dt * k3));
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw IntegrationBlowupError(step, "non-finite state");
    if (needs_renormalization(x)) {
      x = x.cwiseMax(0.0);
      const double total = x.sum();
      if (!(total > 0.0)) throw IntegrationBlowupError(step, "state left the simplex");
      x /= total;
      ++corrections;
    }
    series.samples.push_back(x);
  }

  TrajectoryMeta meta;
  meta.source = "ode";
  meta.a = g.parameter();
  meta.model = model.name();
  if (model.kind == DynamicsModel::Kind::Logit) meta.noise = model.noise;
  meta.drift_corrections = corrections;
  return Trajectory(std::move(series), std::move(meta));
}

SimplexState fixed_point(const DynamicsModel& model, const GameSpec& g, const SimplexState& guess,
                         const FixedPointOptions& opts) {
  NewtonResult r = newton(model, g, guess.vec(), opts.tolerance, opts.max_iterations);
  if (r.converged) return SimplexState::project(r.x);

  if (model.kind == DynamicsModel::Kind::Logit) {
    // Continuation in softmax sharpness: the low-sharpness rest point is
    // near uniform, and each stage seeds the next.
    const double target = model.logit_sharpness();
    int budget = opts.max_iterations;
    Vec4 x = SimplexState::uniform().vec();
    double k = std::min(target, 0.1);
    while (true) {
      DynamicsModel stage = model;
      stage.noise = model.convention == LogitConvention::Temperature ? 1.0 / k : k;
      if (k == target) stage.noise = model.noise;
      NewtonResult s = newton(stage, g, x, opts.tolerance, budget);
      budget -= s.iterations;
      if (!s.converged) {
        r = s;
        break;
      }
      x = s.x;
      if (k == target) return SimplexState::project(x);
      k = std::min(target, k * 1.25);
      if (budget <= 0) {
        r = s;
        break;
      }
    }
  }
  throw ConvergenceError(r.residual, "fixed point iteration for " + model.name() + " did not converge");
}

}  // namespace cyclegame

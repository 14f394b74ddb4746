#include "cyclegame/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "cyclegame/errors.hpp"

namespace cyclegame {

namespace {

void require_length(const TimeSeries& series) {
  if (series.samples.size() < 2) throw ValidationError("measurement needs a series of at least 2 samples");
}

}  // namespace

double AxisVector::norm() const {
  return std::sqrt(components[0] * components[0] + components[1] * components[1] +
                   components[2] * components[2]);
}

double angular_momentum(const TimeSeries& series, const Vec4& origin, int m, int n) {
  require_length(series);
  if (m < 0 || n > 3 || m >= n) throw ValidationError("subspace indices must satisfy 1 <= m < n <= 4");
  const auto& xs = series.samples;
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
    const double rx = xs[t][m] - origin[m];
    const double ry = xs[t][n] - origin[n];
    const double vx = xs[t + 1][m] - xs[t][m];
    const double vy = xs[t + 1][n] - xs[t][n];
    total += rx * vy - ry * vx;
  }
  return total / static_cast<double>(xs.size() - 1);
}

AngularMomentumSet angular_momentum_set(const TimeSeries& series, const Vec4& origin) {
  require_length(series);
  AngularMomentumSet out;
  out.origin = origin;
  out.n_samples = series.samples.size();
  for (int i = 0; i < 6; ++i) {
    out.values[i] = angular_momentum(series, origin, kSubspaces[i].first, kSubspaces[i].second);
  }
  return out;
}

AxisVector rotation_axis(const TimeSeries& series, const Vec4& origin) {
  require_length(series);
  const auto& xs = series.samples;
  // x1, x3, x2 as the x, y, z coordinates.
  constexpr std::array<int, 3> order{0, 2, 1};
  Eigen::Vector3d total = Eigen::Vector3d::Zero();
  for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
    Eigen::Vector3d r, v;
    for (int k = 0; k < 3; ++k) {
      r[k] = xs[t][order[k]] - origin[order[k]];
      v[k] = xs[t + 1][order[k]] - xs[t][order[k]];
    }
    total += r.cross(v);
  }
  total /= static_cast<double>(xs.size() - 1);
  return {{total[0], total[1], total[2]}};
}

AxisVector axis_from_set(const Set6& values) {
  const EigencycleSet e{values, EigencycleSet::Normalization::Raw};
  return {{e.at(2, 1), e.at(1, 0), e.at(0, 2)}};
}

Vec4 empirical_mean(const TimeSeries& series) {
  if (series.samples.empty()) throw ValidationError("empty series has no mean");
  Vec4 sum = Vec4::Zero();
  for (const auto& x : series.samples) sum += x;
  return sum / static_cast<double>(series.samples.size());
}

double line_fit_residual(const TimeSeries& series, int m, int n) {
  require_length(series);
  const auto& xs = series.samples;
  const double count = static_cast<double>(xs.size());
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& x : xs) mean += Eigen::Vector2d(x[m], x[n]);
  mean /= count;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& x : xs) {
    const Eigen::Vector2d d(x[m] - mean[0], x[n] - mean[1]);
    cov += d * d.transpose();
  }
  cov /= count;
  // Smallest eigenvalue of the scatter matrix = mean squared perpendicular
  // distance to the best line.
  const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(cov).eigenvalues()[0];
  return std::sqrt(std::max(0.0, smallest));
}

}  // namespace cyclegame

namespace cyclegame {

LinearizedMeasurement measure_linearized(const Spectrum& s, double perturbation, double periods, double dt) {
  if (!(perturbation > 0.0) || !(periods > 0.0)) throw ValidationError("perturbation and periods must be positive");
  const EigenPair& mode = principal_complex_mode(s);
  // Finite-difference spectra leave the mode a hair off the tangent space.
  Vec4 direction = mode.vector.real();
  direction.array() -= direction.mean();
  const Vec4 offset = perturbation * direction / direction.lpNorm<Eigen::Infinity>();
  const double period = 2.0 * std::numbers::pi / mode.value.imag();
  double horizon = periods * period;
  const double decay = -mode.value.real();
  if (dt <= 0.0) {
    dt = period / 200.0;
    // Strongly damped modes vanish long before one turn; resolve the decay instead.
    if (decay > 0.0) dt = std::min(dt, 0.02 / decay);
  }
  if (decay > 0.0) horizon = std::min(horizon, 30.0 / decay);
  const auto steps = std::max(2L, static_cast<long>(std::ceil(horizon / dt)));
  const TimeSeries ts = linearized_trajectory(s, offset, dt, steps);
  return {angular_momentum_set(ts, Vec4::Zero()), rotation_axis(ts, Vec4::Zero())};
}

}  // namespace cyclegame

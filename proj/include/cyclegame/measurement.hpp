#pragma once

#include <array>
#include <cstddef>

#include "cyclegame/dynamics.hpp"
#include "cyclegame/eigencycle.hpp"

namespace cyclegame {

// Per-subspace mean angular momentum of a series about an origin, same index
// order as EigencycleSet.
struct AngularMomentumSet {
  Set6 values{};
  Vec4 origin = Vec4::Zero();
  std::size_t n_samples = 0;

  double operator[](int i) const { return values[i]; }
  // Same values viewed as an (unnormalized) eigencycle set.
  EigencycleSet as_set() const { return {values, EigencycleSet::Normalization::Raw}; }
};

// Mean angular momentum with strategy 1, 3, 2 as the x, y, z axes; x4 is
// dropped.
struct AxisVector {
  std::array<double, 3> components{};

  double operator[](int i) const { return components[i]; }
  double norm() const;
};

// (1/(N-1)) sum_t (x(t) - O) x (x(t+1) - x(t)) in the (x_m, x_n) plane.
// m, n are zero-based with m < n.
double angular_momentum(const TimeSeries& series, const Vec4& origin, int m, int n);

AngularMomentumSet angular_momentum_set(const TimeSeries& series, const Vec4& origin);

AxisVector rotation_axis(const TimeSeries& series, const Vec4& origin);

// Axis assembled from pairwise angular momenta: (L32, L21, L13) = (-L23, -L12, L13).
AxisVector axis_from_set(const Set6& values);

// Time average of the samples; fallback origin for experiment-format data.
Vec4 empirical_mean(const TimeSeries& series);

// RMS perpendicular distance of the points (x_m, x_n) to their total-least-
// squares line. Zero iff the projection is a straight segment.
double line_fit_residual(const TimeSeries& series, int m, int n);

}  // namespace cyclegame

namespace cyclegame {

struct LinearizedMeasurement {
  AngularMomentumSet set;
  AxisVector axis;
};

// Measures the linearized orbit started at perturbation * Re(v) / |Re(v)|_inf
// along the principal complex mode. With no dt given, each period is sampled
// 200 times so that fast modes are not aliased; damped modes are sampled at
// 2% of their decay time and cut after 30 decay times.
LinearizedMeasurement measure_linearized(const Spectrum& s, double perturbation = 1e-5, double periods = 3.0,
                                         double dt = 0.0);

}  // namespace cyclegame

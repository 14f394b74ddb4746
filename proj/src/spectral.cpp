#include "cyclegame/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cyclegame/errors.hpp"

namespace cyclegame {

namespace {

constexpr double kRealTol = 1e-12;
constexpr double kFixedPointTol = 1e-8;
constexpr double kDefectiveCondition = 1e12;

bool is_real(Complex z) { return std::abs(z.imag()) <= kRealTol * std::max(1.0, std::abs(z)); }

// Unit norm, with the first component of (near-)maximal modulus rotated onto
// the positive real axis.
CVec4 canonical_phase(CVec4 v) {
  v.normalize();
  const double peak = v.cwiseAbs().maxCoeff();
  int pivot = 0;
  while (std::abs(v[pivot]) < (1.0 - 1e-9) * peak) ++pivot;
  v *= std::conj(v[pivot]) / std::abs(v[pivot]);
  v[pivot] = Complex(v[pivot].real(), 0.0);
  return v;
}

}  // namespace

double Spectrum::max_residual() const {
  double worst = 0.0;
  for (const auto& p : pairs) {
    const CVec4 r = jacobian.cast<Complex>() * p.vector - p.value * p.vector;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

Mat4 analytic_jacobian_replicator(const GameSpec& g) {
  const double a = g.a();
  const double b = a + 1.0;
  Mat4 m;
  m << -2 * a, -2 * a, -b, 2 * a * a,
       b, -2 * a, -b, -a * b,
       -2 * a, b, -b, -a * b,
       -2, -2, 2, -b;
  const double d = 3.0 * a + 1.0;
  return a / (d * d) * m;
}

Mat4 numeric_jacobian(const DynamicsModel& model, const GameSpec& g, const SimplexState& at, double h) {
  const Vec4 x = at.vec();
  const double res = vector_field(model, g, x).lpNorm<Eigen::Infinity>();
  if (!(res < kFixedPointTol)) {
    throw ValidationError("numeric_jacobian requires a rest point (|f| = " + std::to_string(res) + ")");
  }
  Mat4 j;
  for (int c = 0; c < kStrategies; ++c) {
    Vec4 up = x, down = x;
    up[c] += h;
    down[c] -= h;
    j.col(c) = (vector_field(model, g, up) - vector_field(model, g, down)) / (2.0 * h);
  }
  return j;
}

Spectrum eigen_decompose(const Mat4& jacobian, JacobianSource source) {
  if (!jacobian.allFinite()) throw ValidationError("cannot decompose a non-finite matrix");
  Eigen::EigenSolver<Mat4> solver(jacobian, true);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen decomposition failed");

  Spectrum s;
  s.source = source;
  s.jacobian = jacobian;
  for (int i = 0; i < 4; ++i) {
    Complex value = solver.eigenvalues()[i];
    CVec4 vec = solver.eigenvectors().col(i);
    if (is_real(value)) {
      value = Complex(value.real(), 0.0);
      vec = vec.real().cast<Complex>();
    }
    s.pairs[i] = {value, canonical_phase(vec)};
  }
  std::sort(s.pairs.begin(), s.pairs.end(), [](const EigenPair& l, const EigenPair& r) {
    if (l.value.imag() != r.value.imag()) return l.value.imag() > r.value.imag();
    return l.value.real() > r.value.real();
  });

  // Complex members with positive imaginary part come first, partners last
  // in reverse order; make each partner the exact conjugate.
  int lo = 0, hi = 3;
  while (lo < hi && s.pairs[lo].value.imag() > 0.0 && s.pairs[hi].value.imag() < 0.0) {
    s.pairs[hi].value = std::conj(s.pairs[lo].value);
    s.pairs[hi].vector = s.pairs[lo].vector.conjugate();
    ++lo;
    --hi;
  }

  CMat4 v;
  for (int i = 0; i < 4; ++i) v.col(i) = s.pairs[i].vector;
  Eigen::JacobiSVD<CMat4> svd(v);
  const auto& sv = svd.singularValues();
  s.diagonalizable = sv[3] > 0.0 && sv[0] / sv[3] < kDefectiveCondition;
  return s;
}

const EigenPair& principal_complex_mode(const Spectrum& s) {
  const EigenPair* best = nullptr;
  for (const auto& p : s.pairs) {
    if (p.value.imag() > 0.0 && (!best || p.value.imag() > best->value.imag())) best = &p;
  }
  if (!best) throw ValidationError("spectrum has no complex conjugate pair (no cyclic mode)");
  return *best;
}

std::vector<Vec4> linearized_trajectory(const Spectrum& s, const Vec4& offset, std::span<const double> t_grid) {
  if (!offset.allFinite()) throw ValidationError("offset is not finite");
  if (std::abs(offset.sum()) > 1e-9 * offset.lpNorm<Eigen::Infinity>()) {
    throw ValidationError("linearized offset must sum to zero (tangent to the simplex)");
  }
  if (!s.diagonalizable) throw NumericalError("spectrum is not diagonalizable");

  CMat4 v;
  Eigen::Vector4cd lambda;
  for (int i = 0; i < 4; ++i) {
    v.col(i) = s.pairs[i].vector;
    lambda[i] = s.pairs[i].value;
  }
  const Eigen::Vector4cd coeff = v.fullPivLu().solve(offset.cast<Complex>());

  std::vector<Vec4> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const Eigen::Vector4cd evolved = (lambda * t).array().exp() * coeff.array();
    out.push_back((v * evolved).real());
  }
  return out;
}

TimeSeries linearized_trajectory(const Spectrum& s, const Vec4& offset, double dt, long steps) {
  if (!(dt > 0.0) || steps < 1) throw ValidationError("linearized trajectory needs dt > 0 and steps >= 1");
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = dt * static_cast<double>(i);
  TimeSeries ts;
  ts.dt = dt;
  ts.t0 = 0.0;
  ts.samples = linearized_trajectory(s, offset, grid);
  return ts;
}

}  // namespace cyclegame

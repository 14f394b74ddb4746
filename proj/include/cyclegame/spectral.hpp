#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "cyclegame/dynamics.hpp"
#include "cyclegame/game.hpp"

namespace cyclegame {

using Complex = std::complex<double>;
using CVec4 = Eigen::Vector4cd;
using CMat4 = Eigen::Matrix4cd;

struct EigenPair {
  Complex value;
  CVec4 vector;  // unit Euclidean norm, largest-modulus component real and positive
};

enum class JacobianSource { Analytic, Numeric };

// Four eigenpairs of a real 4x4 matrix, ordered by descending imaginary part
// and then descending real part. Complex pairs are exact conjugates.
struct Spectrum {
  std::array<EigenPair, 4> pairs;
  JacobianSource source = JacobianSource::Numeric;
  Mat4 jacobian = Mat4::Zero();
  // False when the eigenvector matrix is numerically singular.
  bool diagonalizable = true;

  // Largest ||J v - lambda v||_inf over the pairs.
  double max_residual() const;
};

// Closed-form replicator Jacobian at the interior equilibrium of the cyclic
// family (unconstrained R^4 coordinates).
Mat4 analytic_jacobian_replicator(const GameSpec& g);

// Central differences of vector_field at a rest point of the model.
Mat4 numeric_jacobian(const DynamicsModel& model, const GameSpec& g, const SimplexState& at, double h = 1e-6);

Spectrum eigen_decompose(const Mat4& jacobian, JacobianSource source = JacobianSource::Numeric);

// Member of the leading complex pair with positive imaginary part.
const EigenPair& principal_complex_mode(const Spectrum& s);

// Real part of sum_i c_i exp(lambda_i t) v_i where offset = sum_i c_i v_i.
// The offset must lie in the zero-sum tangent space of the simplex.
std::vector<Vec4> linearized_trajectory(const Spectrum& s, const Vec4& offset, std::span<const double> t_grid);
TimeSeries linearized_trajectory(const Spectrum& s, const Vec4& offset, double dt, long steps);

}  // namespace cyclegame

#pragma once

#include <array>
#include <utility>
#include <vector>

#include "cyclegame/spectral.hpp"

namespace cyclegame {

// Subspace index pairs in the fixed order (1,2),(1,3),(1,4),(2,3),(2,4),(3,4),
// zero-based here.
inline constexpr std::array<std::pair<int, int>, 6> kSubspaces{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Position of subspace (m, n), zero-based m < n, in kSubspaces.
int subspace_index(int m, int n);

using Set6 = std::array<double, 6>;

struct EigencycleSet {
  enum class Normalization { Raw, Unit };

  Set6 values{};
  Normalization normalization = Normalization::Raw;

  double operator[](int i) const { return values[i]; }
  double at(int m, int n) const;  // zero-based, either order (antisymmetric)
  double norm() const;
  EigencycleSet normalized() const;  // throws on an all-zero set
};

// pi |eta_m| |eta_n| sin(arg eta_m - arg eta_n)
double eigencycle_pair(Complex eta_m, Complex eta_n);
// pi Im(eta_m conj(eta_n)); identical to the trig form.
double eigencycle_pair_product(Complex eta_m, Complex eta_n);

EigencycleSet eigencycle_set(const CVec4& v);

// (sigma24, sigma14 + sigma34, sigma12 - sigma23): all vanish for the
// principal mode of the cyclic family, whatever a is.
std::array<double, 3> invariant_identities(const EigencycleSet& e);

// Unit-normalized principal-mode set of the model's Jacobian at its rest
// point. Replicator uses the closed-form Jacobian, the other models the
// finite-difference one.
struct TheoryResult {
  SimplexState rest_point;
  Spectrum spectrum;
  EigenPair mode;
  EigencycleSet raw;
  EigencycleSet unit;
};
TheoryResult theory_eigencycles(const DynamicsModel& model, const GameSpec& g);

struct SweepRow {
  double a;
  EigencycleSet set;  // unit-normalized
};
std::vector<SweepRow> sweep_a(const std::vector<double>& a_values);

// Closed curve (Re(e^{i theta} eta_m), Re(e^{i theta} eta_n)), theta
// increasing, of one subspace. Its signed area is the eigencycle value.
struct Ellipse {
  int m = 0;
  int n = 0;
  double sigma = 0.0;
  int orientation = 0;  // +1 counter-clockwise, -1 clockwise, 0 degenerate
  std::vector<std::array<double, 2>> vertices;
};
std::vector<Ellipse> lissajous_geometry(const EigenPair& mode, int vertices = 10000);

// Shoelace signed area of a closed polygon.
double polygon_signed_area(const std::vector<std::array<double, 2>>& vertices);

}  // namespace cyclegame

#include "cyclegame/eigencycle.hpp"

#include <cmath>
#include <numbers>

#include "cyclegame/errors.hpp"

namespace cyclegame {

int subspace_index(int m, int n) {
  for (int i = 0; i < 6; ++i) {
    if (kSubspaces[i].first == m && kSubspaces[i].second == n) return i;
  }
  throw ValidationError("subspace indices must satisfy 0 <= m < n <= 3");
}

double EigencycleSet::at(int m, int n) const {
  if (m == n) return 0.0;
  return m < n ? values[subspace_index(m, n)] : -values[subspace_index(n, m)];
}

double EigencycleSet::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

EigencycleSet EigencycleSet::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw ValidationError("cannot normalize an all-zero eigencycle set");
  EigencycleSet out{values, Normalization::Unit};
  for (double& v : out.values) v /= n;
  return out;
}

double eigencycle_pair(Complex eta_m, Complex eta_n) {
  return std::numbers::pi * std::abs(eta_m) * std::abs(eta_n) * std::sin(std::arg(eta_m) - std::arg(eta_n));
}

double eigencycle_pair_product(Complex eta_m, Complex eta_n) {
  return std::numbers::pi * (eta_m * std::conj(eta_n)).imag();
}

EigencycleSet eigencycle_set(const CVec4& v) {
  EigencycleSet e;
  for (int i = 0; i < 6; ++i) e.values[i] = eigencycle_pair(v[kSubspaces[i].first], v[kSubspaces[i].second]);
  return e;
}

std::array<double, 3> invariant_identities(const EigencycleSet& e) {
  return {e.at(1, 3), e.at(0, 3) + e.at(2, 3), e.at(0, 1) - e.at(1, 2)};
}

TheoryResult theory_eigencycles(const DynamicsModel& model, const GameSpec& g) {
  const SimplexState guess = g.parameter() ? nash_equilibrium(g) : SimplexState::uniform();
  const SimplexState rest = fixed_point(model, g, guess);
  Spectrum spectrum = (model.kind == DynamicsModel::Kind::Replicator && g.parameter())
                          ? eigen_decompose(analytic_jacobian_replicator(g), JacobianSource::Analytic)
                          : eigen_decompose(numeric_jacobian(model, g, rest), JacobianSource::Numeric);
  const EigenPair mode = principal_complex_mode(spectrum);
  const EigencycleSet raw = eigencycle_set(mode.vector);
  return {rest, std::move(spectrum), mode, raw, raw.normalized()};
}

std::vector<SweepRow> sweep_a(const std::vector<double>& a_values) {
  std::vector<SweepRow> rows;
  rows.reserve(a_values.size());
  for (double a : a_values) {
    const GameSpec g = make_game(a);
    const Spectrum s = eigen_decompose(analytic_jacobian_replicator(g), JacobianSource::Analytic);
    rows.push_back({a, eigencycle_set(principal_complex_mode(s).vector).normalized()});
  }
  return rows;
}

std::vector<Ellipse> lissajous_geometry(const EigenPair& mode, int vertices) {
  if (vertices < 3) throw ValidationError("an ellipse polygon needs at least 3 vertices");
  std::vector<Ellipse> out;
  for (const auto& [m, n] : kSubspaces) {
    Ellipse e;
    e.m = m;
    e.n = n;
    e.sigma = eigencycle_pair(mode.vector[m], mode.vector[n]);
    e.orientation = e.sigma > 1e-12 ? 1 : (e.sigma < -1e-12 ? -1 : 0);
    e.vertices.reserve(static_cast<std::size_t>(vertices));
    for (int k = 0; k < vertices; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / vertices;
      const Complex phase = std::polar(1.0, theta);
      e.vertices.push_back({(phase * mode.vector[m]).real(), (phase * mode.vector[n]).real()});
    }
    out.push_back(std::move(e));
  }
  return out;
}

double polygon_signed_area(const std::vector<std::array<double, 2>>& v) {
  double twice = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % n];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * twice;
}

}  // namespace cyclegame

#include "cyclegame/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cyclegame/errors.hpp"

namespace cyclegame {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Lentz continued fraction for the incomplete beta.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace

Set6 normalize_set(const Set6& values) {
  double s = 0.0;
  for (double v : values) s += v * v;
  if (!(s > 0.0)) throw ValidationError("normalization of an all-zero set is undefined");
  const double n = std::sqrt(s);
  Set6 out;
  for (int i = 0; i < 6; ++i) out[i] = values[i] / n;
  return out;
}

double pearson(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("pearson: vectors differ in length");
  if (u.size() < 2) throw ValidationError("pearson: need at least two pairs");
  const double mu = mean_of(u), mv = mean_of(v);
  double suv = 0.0, suu = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double du = u[i] - mu, dv = v[i] - mv;
    suv += du * dv;
    suu += du * du;
    svv += dv * dv;
  }
  if (!(suu > 0.0) || !(svv > 0.0)) throw ValidationError("pearson: zero variance");
  const double r = suv / std::sqrt(suu * svv);
  return std::clamp(r, -1.0, 1.0);
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("t distribution needs positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) throw ValidationError("t statistic is NaN");
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

CorrelationMatrix correlation_matrix(const std::vector<LabeledVector>& sources, double flag_threshold) {
  if (sources.empty()) throw ValidationError("correlation matrix needs at least one source");
  CorrelationMatrix m;
  m.flag_threshold = flag_threshold;
  const std::size_t n = sources.size();
  m.rho.assign(n, std::vector<double>(n, 1.0));
  for (const auto& s : sources) m.labels.push_back(s.label);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double r;
      try {
        r = pearson(sources[i].values, sources[j].values);
      } catch (const ValidationError& e) {
        throw ValidationError("correlation " + sources[i].label + " vs " + sources[j].label + ": " + e.what());
      }
      m.rho[i][j] = m.rho[j][i] = r;
    }
  }
  return m;
}

OlsResult ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("ols: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw ValidationError("ols: need at least 3 points");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("ols: x is constant");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (intercept + slope * x[i]);
    sse += e * e;
  }
  const double df = static_cast<double>(n - 2);
  const double se = std::sqrt(sse / df / sxx);
  double p;
  if (se > 0.0) {
    p = student_t_two_sided(slope / se, df);
  } else {
    p = slope != 0.0 ? 0.0 : 1.0;
  }
  const double r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return {slope, intercept, p, r, n};
}

TTestResult ttest_zero(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw ValidationError("t-test: need at least 2 samples");
  const double m = mean_of(samples);
  double ss = 0.0;
  for (double s : samples) ss += (s - m) * (s - m);
  const double var = ss / static_cast<double>(n - 1);
  if (!(var > 0.0)) throw ValidationError("t-test: zero sample variance");
  const double t = m / std::sqrt(var / static_cast<double>(n));
  return {t, student_t_two_sided(t, static_cast<double>(n - 1)), n, m};
}

}  // namespace cyclegame
